#pragma once

#include <ddball/geometry.hpp>

#include <Eigen/SparseCore>
#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace ddball {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Stair-step finite-difference discretization of -Δu = f on the union with
// homogeneous Dirichlet data.
struct GridDomain {
    Vec3 origin = Vec3::Zero();
    double h = 1.0;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<int> dof_of_node;  // -1 for nodes outside the open union
    std::vector<Vec3> node_coords;  // per DOF
    SparseMatrix laplacian;

    int num_dofs() const { return static_cast<int>(node_coords.size()); }
    std::size_t node(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
    }
    Vec3 coord(int i, int j, int k) const { return origin + h * Vec3(i, j, k); }
};

// Origin is a multiple of h, so lattice-aligned geometries stay symmetric.
GridDomain build_grid(const BallUnion& u, double h, std::size_t dof_cap = 2'000'000);

// DOFs strictly inside ball i, ascending.
IndexList subdomain_dofs(const GridDomain& g, const BallUnion& u, int i);

// Throws if a subdomain is empty. Returns the neighbouring pairs (i < j)
// whose overlap holds no DOF; with `strict` these are an error too.
std::vector<std::pair<int, int>> validate_decomposition(const GridDomain& g, const BallUnion& u,
                                                        const std::vector<IndexList>& dofs, bool strict = false);

Vec assemble_rhs(const GridDomain& g, const std::function<double(const Vec3&)>& f);
Vec assemble_rhs(const GridDomain& g, double constant);

}  // namespace ddball
