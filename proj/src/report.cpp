#include "hballs/report.hpp"

namespace hballs {

Check& CheckReport::add(const std::string& name, double value, double tol,
                        const std::string& detail) {
    checks.push_back({name, value, tol, value <= tol, detail});
    return checks.back();
}

Check& CheckReport::add_flag(const std::string& name, bool ok, const std::string& detail) {
    // flags are folded into the value <= tol convention: 0 passes, 1 fails
    checks.push_back({name, ok ? 0.0 : 1.0, 0.5, ok, detail});
    return checks.back();
}

void CheckReport::append(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool CheckReport::overall() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const Check* CheckReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    nlohmann::json body = nlohmann::json::object();
    for (const auto& c : checks) {
        nlohmann::json e{{"value", c.value}, {"tol", c.tol}, {"pass", c.pass}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        body[c.name] = e;
    }
    j["checks"] = body;
    j["overall"] = overall();
    return j;
}

}  // namespace hballs
