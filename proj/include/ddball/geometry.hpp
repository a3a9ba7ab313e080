#pragma once

#include <ddball/types.hpp>

#include <string>
#include <utility>
#include <vector>

namespace ddball {

struct Ball {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
};

// Uniform bucket grid over ball bounding boxes. A query at p returns every
// ball whose (optionally enlarged) bounding box meets the cell containing p.
class BallHash {
public:
    BallHash() = default;
    BallHash(const std::vector<Ball>& balls, double pad = 0.0);

    const IndexList& candidates(const Vec3& p) const;

private:
    Vec3 origin_ = Vec3::Zero();
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<IndexList> buckets_;
    IndexList empty_;
};

struct IndexPartition {
    IndexList interior;        // I_int
    IndexList boundary;        // I_b
    IndexList deep_interior;   // I_int*
    IndexList deep_boundary;   // I_b*
    std::vector<IndexList> star_neighbors;  // N_i*
};

// Neighbor lists N_i (sorted, contain i) under the open-overlap rule with a
// relative tangency tolerance.
std::vector<IndexList> compute_neighbors(const std::vector<Ball>& balls);

// Quasi-uniform points on the unit sphere.
std::vector<Vec3> fibonacci_sphere(int n);

IndexPartition classify_indices(const std::vector<Ball>& balls,
                                const std::vector<IndexList>& neighbors,
                                int sphere_samples = 2000);

class BallUnion {
public:
    explicit BallUnion(std::vector<Ball> balls, int sphere_samples = 2000);

    int size() const { return static_cast<int>(balls_.size()); }
    const std::vector<Ball>& balls() const { return balls_; }
    const Ball& ball(int i) const { return balls_[i]; }
    const Vec3& center(int i) const { return balls_[i].center; }
    double radius(int i) const { return balls_[i].radius; }

    const IndexList& neighbors(int i) const { return neighbors_[i]; }
    IndexList proper_neighbors(int i) const;
    const IndexList& interior_indices() const { return part_.interior; }
    const IndexList& boundary_indices() const { return part_.boundary; }
    const IndexList& deep_interior() const { return part_.deep_interior; }
    const IndexList& deep_boundary() const { return part_.deep_boundary; }
    const IndexList& star_neighbors(int i) const { return part_.star_neighbors[i]; }
    bool is_interior(int i) const { return interior_flag_[i]; }

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    Vec3 lower() const { return lo_; }
    Vec3 upper() const { return hi_; }
    int sphere_samples() const { return sphere_samples_; }

    // Balls that may contain p.
    const IndexList& candidates(const Vec3& p) const { return hash_.candidates(p); }
    // p lies in the open union.
    bool contains(const Vec3& p) const;
    // p lies in the closed union.
    bool contains_closed(const Vec3& p) const;
    // Number of open balls containing p.
    int multiplicity(const Vec3& p) const;
    // Indices of open balls containing p, ascending.
    IndexList containing(const Vec3& p) const;

private:
    std::vector<Ball> balls_;
    std::vector<IndexList> neighbors_;
    IndexPartition part_;
    std::vector<char> interior_flag_;
    double r_min_ = 0.0, r_max_ = 0.0;
    Vec3 lo_, hi_;
    int sphere_samples_ = 2000;
    BallHash hash_;
};

// Parse whitespace-separated "x y z r" lines; '#' starts a comment.
std::vector<Ball> parse_xyzr(const std::string& text);
BallUnion load_xyzr(const std::string& path, int sphere_samples = 2000);
void write_xyzr(const std::string& path, const std::vector<Ball>& balls);

struct AssumptionReport {
    bool connected = false;
    std::vector<std::pair<int, int>> containment_violations;  // (i, j): Ω_i ⊆ Ω_j
    double beta_min = 0.0;     // sampled cone half-angle lower bound
    double gamma_alpha = 0.0;  // min over samples of the max-min cone cosine
    std::vector<Vec3> witness_points;
    int sampled_points = 0;

    bool a4_holds() const { return beta_min > 0.0; }
};

// max over unit n of min_t(-n . v_t), with the maximizing n.
std::pair<double, Vec3> cone_maxmin(const std::vector<Vec3>& v);

AssumptionReport check_assumptions(const BallUnion& u, int circle_samples = 64);

}  // namespace ddball
