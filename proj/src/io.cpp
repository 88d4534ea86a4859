#include "hballs/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace hballs {

namespace {

struct FileHandle {
    std::FILE* f;
    explicit FileHandle(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
        if (!f) throw Error("cannot open " + path + " for writing");
    }
    ~FileHandle() {
        if (f) std::fclose(f);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

}  // namespace

void write_pgm(const RegionMask& region, const std::string& path) {
    const GridSpec& g = region.grid;
    FileHandle fh(path);
    std::fprintf(fh.f, "P5\n%d %d\n255\n", g.nx, g.ny);
    // image rows run top-down: first row is the largest y
    std::vector<unsigned char> row(g.nx);
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) row[i] = region.at(i, j) ? 255 : 0;
        std::fwrite(row.data(), 1, row.size(), fh.f);
    }
}

void write_csv(const ScalarField& f, const std::string& path) {
    const GridSpec& g = f.grid;
    FileHandle fh(path);
    std::fprintf(fh.f, "x,y,value\n");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            std::fprintf(fh.f, "%.17g,%.17g,%.17g\n", g.x(i), g.y(j), f.at(i, j));
}

void write_csv(const ComplexField& f, const RegionMask& where, const std::string& path) {
    if (!(f.grid == where.grid)) throw GridMismatch();
    const GridSpec& g = f.grid;
    FileHandle fh(path);
    std::fprintf(fh.f, "x,y,re,im\n");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!where.at(i, j)) continue;
            Complex z = f.at(i, j);
            std::fprintf(fh.f, "%.17g,%.17g,%.17g,%.17g\n", g.x(i), g.y(j), z.real(), z.imag());
        }
}

void write_csv(const BoundaryMeasure& nu, const std::string& path) {
    const GridSpec& g = nu.grid;
    FileHandle fh(path);
    std::fprintf(fh.f, "x,y,weight\n");
    for (const auto& e : nu.entries)
        std::fprintf(fh.f, "%.17g,%.17g,%.17g\n", g.x(e.i), g.y(e.j), e.weight);
}

void write_points_csv(const std::vector<Point>& pts, const std::string& path) {
    FileHandle fh(path);
    std::fprintf(fh.f, "x,y\n");
    for (Point p : pts) std::fprintf(fh.f, "%.17g,%.17g\n", p.x, p.y);
}

}  // namespace hballs
