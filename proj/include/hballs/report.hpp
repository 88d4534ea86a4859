#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hballs {

// Uniform check record: pass iff value <= tol.
struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;  // optional location / context
};

struct CheckReport {
    std::vector<Check> checks;

    // pass iff value <= tol
    Check& add(const std::string& name, double value, double tol, const std::string& detail = "");
    Check& add_flag(const std::string& name, bool ok, const std::string& detail = "");
    void append(const CheckReport& other);
    bool overall() const;
    const Check* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

}  // namespace hballs
