#pragma once

#include <string>

#include "hballs/balayage.hpp"
#include "hballs/grid.hpp"

namespace hballs {

// binary P5, 8-bit, member nodes 255, top row = largest y
void write_pgm(const RegionMask& region, const std::string& path);

// "x,y,value" per node
void write_csv(const ScalarField& f, const std::string& path);

// "x,y,re,im" over member nodes
void write_csv(const ComplexField& f, const RegionMask& where, const std::string& path);

// "x,y,weight" per boundary node carrying weight
void write_csv(const BoundaryMeasure& nu, const std::string& path);

// "x,y" per point
void write_points_csv(const std::vector<Point>& pts, const std::string& path);

}  // namespace hballs
