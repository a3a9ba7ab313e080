#pragma once

#include <ddball/geometry.hpp>

#include <array>
#include <vector>

namespace ddball {

// Scalar field on a uniform node grid.
struct LevelSetField {
    Vec3 origin = Vec3::Zero();
    double h = 1.0;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> values;

    std::size_t node(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
    }
    Vec3 coord(int i, int j, int k) const { return origin + h * Vec3(i, j, k); }
    std::size_t size() const { return values.size(); }
    // Trilinear interpolation; clamps to the grid.
    double sample(const Vec3& x) const;
    // Points where the field crosses `level`, interpolated along grid edges.
    std::vector<Vec3> extract_level(double level) const;
};

// Squared Euclidean distance transform of a 0/inf cost array, in grid units.
void squared_edt(std::vector<double>& f, const std::array<int, 3>& dims);

// Signed distance to the boundary of the balls inflated by r_p (positive
// inside), via two distance transforms on a grid padded by 4h.
LevelSetField sas_field(const std::vector<Ball>& balls, double r_p, double h,
                        std::size_t node_cap = 16'000'000);

// Nearest-point queries against a point cloud via a uniform hash.
class PointCloudIndex {
public:
    PointCloudIndex(std::vector<Vec3> points, double cell);
    double nearest_distance(const Vec3& x) const;
    bool empty() const { return points_.empty(); }

private:
    std::vector<Vec3> points_;
    double cell_;
    Vec3 origin_;
    std::array<int, 3> dims_{0, 0, 0};
    std::vector<std::size_t> start_;  // CSR buckets
    std::vector<int> items_;
};

// max over grid nodes of Ω^M of the distance to the SES point cloud at
// probe radius r_p; grid-based reference route.
double d_ses_grid(const BallUnion& u, double r_p, double h, std::size_t node_cap = 16'000'000);

}  // namespace ddball
