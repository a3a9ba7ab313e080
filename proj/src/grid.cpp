#include <ddball/grid.hpp>

#include <algorithm>
#include <cmath>

namespace ddball {

GridDomain build_grid(const BallUnion& u, double h, std::size_t dof_cap) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    GridDomain g;
    g.h = h;
    const Vec3 lo = u.lower(), hi = u.upper();
    for (int a = 0; a < 3; ++a) {
        g.origin[a] = std::floor(lo[a] / h) * h;
        g.dims[a] = static_cast<int>(std::ceil((hi[a] - g.origin[a]) / h)) + 1;
    }
    const std::size_t total = static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2];
    if (total > 64 * dof_cap)
        throw ResourceError("grid box has " + std::to_string(total) + " nodes; use a larger h");
    g.dof_of_node.assign(total, -1);
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int k = 0; k < g.dims[2]; ++k) {
                Vec3 x = g.coord(i, j, k);
                if (!u.contains(x)) continue;
                if (g.node_coords.size() >= dof_cap)
                    throw ResourceError("more than " + std::to_string(dof_cap) + " unknowns; use a larger h");
                g.dof_of_node[g.node(i, j, k)] = static_cast<int>(g.node_coords.size());
                g.node_coords.push_back(x);
            }
    if (g.node_coords.empty()) throw DomainError("no grid node lies inside the union; use a smaller h");

    const double inv = 1.0 / (h * h);
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(g.node_coords.size() * 7);
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int k = 0; k < g.dims[2]; ++k) {
                int d = g.dof_of_node[g.node(i, j, k)];
                if (d < 0) continue;
                trip.emplace_back(d, d, 6 * inv);
                const int nb[6][3] = {{i - 1, j, k}, {i + 1, j, k}, {i, j - 1, k},
                                      {i, j + 1, k}, {i, j, k - 1}, {i, j, k + 1}};
                for (const auto& n : nb) {
                    if (n[0] < 0 || n[1] < 0 || n[2] < 0 || n[0] >= g.dims[0] || n[1] >= g.dims[1] ||
                        n[2] >= g.dims[2])
                        continue;
                    int e = g.dof_of_node[g.node(n[0], n[1], n[2])];
                    if (e >= 0) trip.emplace_back(d, e, -inv);
                }
            }
    g.laplacian.resize(g.num_dofs(), g.num_dofs());
    g.laplacian.setFromTriplets(trip.begin(), trip.end());
    g.laplacian.makeCompressed();
    return g;
}

IndexList subdomain_dofs(const GridDomain& g, const BallUnion& u, int i) {
    const Ball& b = u.ball(i);
    int lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
        lo[a] = std::max(0, static_cast<int>(std::floor((b.center[a] - b.radius - g.origin[a]) / g.h)));
        hi[a] = std::min(g.dims[a] - 1, static_cast<int>(std::ceil((b.center[a] + b.radius - g.origin[a]) / g.h)));
    }
    IndexList out;
    for (int x = lo[0]; x <= hi[0]; ++x)
        for (int y = lo[1]; y <= hi[1]; ++y)
            for (int z = lo[2]; z <= hi[2]; ++z) {
                int d = g.dof_of_node[g.node(x, y, z)];
                if (d < 0) continue;
                if ((g.coord(x, y, z) - b.center).squaredNorm() < b.radius * b.radius) out.push_back(d);
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> validate_decomposition(const GridDomain& g, const BallUnion& u,
                                                        const std::vector<IndexList>& dofs, bool strict) {
    std::vector<std::pair<int, int>> missing;
    for (int i = 0; i < u.size(); ++i)
        if (dofs[i].empty())
            throw DomainError("ball " + std::to_string(i) + " holds no grid node; use a smaller h");
    std::vector<int> mark(g.num_dofs(), -1);
    for (int i = 0; i < u.size(); ++i) {
        for (int d : dofs[i]) mark[d] = i;
        for (int j : u.neighbors(i)) {
            if (j <= i) continue;
            bool shared = std::any_of(dofs[j].begin(), dofs[j].end(), [&](int d) { return mark[d] == i; });
            if (shared) continue;
            if (strict)
                throw DomainError("overlap of balls " + std::to_string(i) + " and " + std::to_string(j) +
                                  " holds no grid node; use a smaller h");
            missing.emplace_back(i, j);
        }
    }
    return missing;
}

Vec assemble_rhs(const GridDomain& g, const std::function<double(const Vec3&)>& f) {
    Vec b(g.num_dofs());
    for (int d = 0; d < g.num_dofs(); ++d) {
        b[d] = f(g.node_coords[d]);
        if (!std::isfinite(b[d])) throw DomainError("source term is not finite at a grid node");
    }
    return b;
}

Vec assemble_rhs(const GridDomain& g, double constant) {
    return assemble_rhs(g, [constant](const Vec3&) { return constant; });
}

}  // namespace ddball
