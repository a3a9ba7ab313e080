#include <ddball/generators.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ddball {

std::vector<Ball> lattice_balls(int nx, int ny, int nz, double r) {
    if (nx < 1 || ny < 1 || nz < 1) throw Error("lattice dimensions must be positive");
    if (!(r > 0.0)) throw Error("lattice radius must be positive");
    if (static_cast<long>(nx) * ny * nz > 1 && r <= 0.5)
        throw AssumptionError("lattice with r <= 0.5 is disconnected");
    std::vector<Ball> balls;
    balls.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int i = 1; i <= nx; ++i)
        for (int j = 1; j <= ny; ++j)
            for (int k = 1; k <= nz; ++k) balls.push_back({Vec3(i, j, k), r});
    return balls;
}

BallUnion lattice(int nx, int ny, int nz, double r, int sphere_samples) {
    return BallUnion(lattice_balls(nx, ny, nz, r), sphere_samples);
}

std::vector<Ball> chain_balls(int m, double spacing, double r) {
    if (m < 1) throw Error("chain length must be positive");
    if (!(r > 0.0)) throw Error("chain radius must be positive");
    if (m > 1 && !(spacing < 2 * r)) throw AssumptionError("chain spacing must be below 2r for overlap");
    std::vector<Ball> balls;
    for (int k = 0; k < m; ++k) balls.push_back({Vec3((k - 0.5 * (m - 1)) * spacing, 0, 0), r});
    return balls;
}

BallUnion chain(int m, double spacing, double r, int sphere_samples) {
    return BallUnion(chain_balls(m, spacing, r), sphere_samples);
}

namespace {

std::vector<double> parse_numbers(const std::string& body, const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw Error("bad number '" + tok + "' in generator spec '" + spec + "'");
        out.push_back(v);
    }
    return out;
}

int as_count(double v, const std::string& spec) {
    if (v < 1 || v != static_cast<int>(v)) throw Error("expected a positive integer in '" + spec + "'");
    return static_cast<int>(v);
}

}  // namespace

std::vector<Ball> balls_from_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::string kind = spec.substr(0, colon);
        auto v = parse_numbers(spec.substr(colon + 1), spec);
        if (kind == "lattice") {
            if (v.size() != 3 && v.size() != 4)
                throw Error("lattice spec is lattice:nx,ny,nz[,r], got '" + spec + "'");
            return lattice_balls(as_count(v[0], spec), as_count(v[1], spec), as_count(v[2], spec),
                                 v.size() == 4 ? v[3] : 0.9);
        }
        if (kind == "chain") {
            if (v.empty() || v.size() > 3) throw Error("chain spec is chain:M[,spacing[,r]], got '" + spec + "'");
            return chain_balls(as_count(v[0], spec), v.size() > 1 ? v[1] : 1.0, v.size() > 2 ? v[2] : 0.9);
        }
        std::ifstream probe(spec);
        if (!probe) throw Error("unknown generator '" + kind + "' (use lattice:... or chain:...) in '" + spec + "'");
    }
    std::ifstream f(spec);
    if (!f) throw Error("cannot open geometry file '" + spec + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_xyzr(ss.str());
}

BallUnion union_from_spec(const std::string& spec, int sphere_samples) {
    return BallUnion(balls_from_spec(spec), sphere_samples);
}

}  // namespace ddball
