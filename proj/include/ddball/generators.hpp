#pragma once

#include <ddball/geometry.hpp>

#include <string>
#include <vector>

namespace ddball {

// Balls at the integer points of [1,nx]x[1,ny]x[1,nz]; x varies slowest.
std::vector<Ball> lattice_balls(int nx, int ny, int nz, double r = 0.9);
BallUnion lattice(int nx, int ny, int nz, double r = 0.9, int sphere_samples = 2000);

// M collinear balls on the x-axis, centred at the origin.
std::vector<Ball> chain_balls(int m, double spacing = 1.0, double r = 0.9);
BallUnion chain(int m, double spacing = 1.0, double r = 0.9, int sphere_samples = 2000);

// "lattice:nx,ny,nz,r", "chain:M,spacing,r" or a path to an xyzr file.
std::vector<Ball> balls_from_spec(const std::string& spec);
BallUnion union_from_spec(const std::string& spec, int sphere_samples = 2000);

}  // namespace ddball
