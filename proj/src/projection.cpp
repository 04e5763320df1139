#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <thread>
#include <vector>

#include "writhe_lab/invariants.hpp"
#include "writhe_lab/rng.hpp"

namespace writhe_lab {

namespace {

constexpr double kParamMargin = 1e-9;

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
};

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// One projected edge: 2D endpoints in the viewing plane plus the depths
/// (coordinates along nu) of its 3D endpoints.
struct ProjectedEdge {
    Vec2 a, b;
    double depth_a, depth_b;
    std::size_t global;  // index into the flat edge list
};

struct FlatEdge {
    Vec3 a, b;
    std::size_t component;
    std::size_t local;
};

std::vector<FlatEdge> flatten(const CurveSystem& system) {
    std::vector<FlatEdge> edges;
    edges.reserve(system.total_edges());
    for (std::size_t c = 0; c < system.size(); ++c) {
        const auto& curve = system.component(c);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            edges.push_back({curve.edge_start(i), curve.edge_end(i), c, i});
        }
    }
    return edges;
}

bool shares_endpoint(const FlatEdge& e, const FlatEdge& f) {
    return e.a == f.a || e.a == f.b || e.b == f.a || e.b == f.b;
}

[[noreturn]] void reject(const std::string& reason) {
    throw DegenerateDirectionError("degenerate projection direction: " + reason);
}

/// Enumerates the transversal crossings of the projected diagram, or throws
/// DegenerateDirectionError when nu fails the genericity test. Uses a uniform
/// grid over the viewing plane; a candidate pair is counted in the cell that
/// contains its crossing point, so shared cells never double-count.
std::vector<Crossing> enumerate_crossings(const std::vector<FlatEdge>& edges,
                                          double diameter, const Vec3& nu) {
    const Vec3 u = orthogonal_unit(nu);
    const Vec3 v = nu.cross(u);
    const std::size_t m = edges.size();

    std::vector<ProjectedEdge> proj(m);
    double max_len = 0.0;
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (std::size_t i = 0; i < m; ++i) {
        const FlatEdge& e = edges[i];
        proj[i] = {{e.a.dot(u), e.a.dot(v)},
                   {e.b.dot(u), e.b.dot(v)},
                   e.a.dot(nu),
                   e.b.dot(nu),
                   i};
        const Vec2 d = proj[i].b - proj[i].a;
        const double len = std::hypot(d.x, d.y);
        if (len < 1e-9 * diameter) {
            std::ostringstream os;
            os << "projected edge " << edges[i].local << " of component "
               << edges[i].component << " shorter than tolerance";
            reject(os.str());
        }
        max_len = std::max(max_len, len);
        lo.x = std::min({lo.x, proj[i].a.x, proj[i].b.x});
        lo.y = std::min({lo.y, proj[i].a.y, proj[i].b.y});
        hi.x = std::max({hi.x, proj[i].a.x, proj[i].b.x});
        hi.y = std::max({hi.y, proj[i].a.y, proj[i].b.y});
    }

    // Grid with cells at least one max edge length wide, capped so tiny cells
    // never dominate; edges are inserted into every cell their dilated
    // bounding box touches.
    const double margin = 2e-9 * diameter + 1e-300;
    const double span_x = hi.x - lo.x, span_y = hi.y - lo.y;
    const double cell = std::max({max_len * 1.01 + 2.0 * margin, span_x / 96.0, span_y / 96.0});
    const int nx = std::max(1, static_cast<int>(span_x / cell) + 1);
    const int ny = std::max(1, static_cast<int>(span_y / cell) + 1);
    auto cell_of = [&](double x, double y) {
        int cx = static_cast<int>((x - lo.x) / cell);
        int cy = static_cast<int>((y - lo.y) / cell);
        cx = std::clamp(cx, 0, nx - 1);
        cy = std::clamp(cy, 0, ny - 1);
        return std::pair<int, int>(cx, cy);
    };

    std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(nx) * ny);
    for (std::size_t i = 0; i < m; ++i) {
        const auto [cx0, cy0] = cell_of(std::min(proj[i].a.x, proj[i].b.x) - margin,
                                        std::min(proj[i].a.y, proj[i].b.y) - margin);
        const auto [cx1, cy1] = cell_of(std::max(proj[i].a.x, proj[i].b.x) + margin,
                                        std::max(proj[i].a.y, proj[i].b.y) + margin);
        for (int cy = cy0; cy <= cy1; ++cy) {
            for (int cx = cx0; cx <= cx1; ++cx) {
                bins[static_cast<std::size_t>(cy) * nx + cx].push_back(
                    static_cast<std::uint32_t>(i));
            }
        }
    }

    std::vector<Crossing> crossings;
    std::vector<Vec2> points;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const auto& bin = bins[b];
        const int bx = static_cast<int>(b % nx);
        const int by = static_cast<int>(b / nx);
        for (std::size_t ii = 0; ii < bin.size(); ++ii) {
            for (std::size_t jj = ii + 1; jj < bin.size(); ++jj) {
                std::size_t i = bin[ii], j = bin[jj];
                if (i > j) std::swap(i, j);
                const FlatEdge& ei = edges[i];
                const FlatEdge& ej = edges[j];
                if (shares_endpoint(ei, ej)) continue;  // incident or coincident pair
                const ProjectedEdge& pi = proj[i];
                const ProjectedEdge& pj = proj[j];
                const Vec2 r = pi.b - pi.a;
                const Vec2 s = pj.b - pj.a;
                const Vec2 w = pj.a - pi.a;
                const double denom = cross2(r, s);
                const double li = std::hypot(r.x, r.y), lj = std::hypot(s.x, s.y);
                if (std::fabs(denom) <= 1e-12 * li * lj) {
                    // Nearly parallel in projection; harmless unless they pass
                    // within tolerance of each other.
                    const double d0 = std::fabs(cross2(r, w)) / li;
                    const double t0 = (w.x * r.x + w.y * r.y) / (li * li);
                    const double t1 = t0 + (s.x * r.x + s.y * r.y) / (li * li);
                    const bool overlaps = std::max(t0, t1) > -kParamMargin &&
                                          std::min(t0, t1) < 1.0 + kParamMargin;
                    if (d0 < 1e-9 * diameter && overlaps) {
                        reject("projected edges nearly collinear and overlapping");
                    }
                    continue;
                }
                const double t = cross2(w, s) / denom;
                const double q = cross2(w, r) / denom;
                const bool near_t = t > -kParamMargin && t < 1.0 + kParamMargin;
                const bool near_q = q > -kParamMargin && q < 1.0 + kParamMargin;
                if (!near_t || !near_q) continue;
                if (t < kParamMargin || t > 1.0 - kParamMargin || q < kParamMargin ||
                    q > 1.0 - kParamMargin) {
                    std::ostringstream os;
                    os << "crossing parameter within tolerance of an edge endpoint "
                          "(edges "
                       << i << ", " << j << ")";
                    reject(os.str());
                }
                // Count the crossing only in the cell that owns its point.
                const Vec2 p{pi.a.x + t * r.x, pi.a.y + t * r.y};
                const auto [cx, cy] = cell_of(p.x, p.y);
                if (cx != bx || cy != by) continue;
                const double depth_i = pi.depth_a + t * (pi.depth_b - pi.depth_a);
                const double depth_j = pj.depth_a + q * (pj.depth_b - pj.depth_a);
                if (std::fabs(depth_i - depth_j) < 1e-12 * diameter) {
                    reject("over/under depths coincide at a crossing");
                }
                Crossing c;
                c.edge_a = i;
                c.edge_b = j;
                c.param_a = t;
                c.param_b = q;
                const bool i_over = depth_i > depth_j;
                c.over = i_over ? i : j;
                const Vec2& d_over = i_over ? r : s;
                const Vec2& d_under = i_over ? s : r;
                c.sign = cross2(d_over, d_under) > 0.0 ? 1 : -1;
                crossings.push_back(c);
                points.push_back(p);
            }
        }
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::hypot(points[i].x - points[j].x, points[i].y - points[j].y) <
                1e-9 * diameter) {
                reject("two crossing points within tolerance of each other");
            }
        }
    }

    std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) {
        return std::tie(a.edge_a, a.edge_b) < std::tie(b.edge_a, b.edge_b);
    });
    return crossings;
}

}  // namespace

ProjectionReport directional_writhe(const CurveSystem& system, const Vec3& nu) {
    if (std::fabs(nu.norm() - 1.0) > 1e-9) {
        throw InvalidParameterError("projection direction must be a unit vector");
    }
    ProjectionReport report;
    report.direction = nu;
    const std::vector<FlatEdge> edges = flatten(system);
    report.crossings = enumerate_crossings(edges, system.diameter(), nu);
    long sum = 0;
    for (const auto& c : report.crossings) sum += c.sign;
    report.directional_writhe = sum;
    return report;
}

long linking_number_projection(const PolygonalCurve& a, const PolygonalCurve& b,
                               const Vec3& nu) {
    const CurveSystem system({a, b});
    const ProjectionReport report = directional_writhe(system, nu);
    const std::size_t na = a.size();
    long sum = 0;
    for (const auto& c : report.crossings) {
        const bool a_in_first = c.edge_a < na;
        const bool b_in_first = c.edge_b < na;
        if (a_in_first != b_in_first) sum += c.sign;
    }
    if (sum % 2 != 0) {
        throw DegenerateDirectionError(
            "odd inter-curve crossing sum; projection not generic");
    }
    return sum / 2;
}

MonteCarloEstimate writhe_monte_carlo(const PolygonalCurve& curve,
                                      std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw InvalidParameterError("monte carlo needs samples >= 1");
    const CurveSystem system({curve});
    const std::vector<FlatEdge> edges = flatten(system);
    const double diameter = system.diameter();

    std::vector<long> omega(samples, 0);
    std::vector<std::uint32_t> retries(samples, 0);
    std::exception_ptr error;
    std::atomic<bool> failed{false};

    // Per-sample RNG substreams keyed by (seed, index): results do not depend
    // on how samples are distributed over threads.
    auto run_sample = [&](std::uint64_t k) {
        Rng rng = Rng::substream(seed, k);
        Vec3 nu = rng.unit_direction();
        for (std::uint32_t attempt = 0;; ++attempt) {
            try {
                const auto crossings = enumerate_crossings(edges, diameter, nu);
                long sum = 0;
                for (const auto& c : crossings) sum += c.sign;
                omega[k] = sum;
                retries[k] = attempt;
                return;
            } catch (const DegenerateDirectionError&) {
                if (attempt >= 1024) throw;
                nu = rng.unit_direction();  // deterministic perturbation: redraw
            }
        }
    };

    const std::uint64_t block = 1024;
    const std::uint64_t nblocks = (samples + block - 1) / block;
    const unsigned nt = std::min<unsigned>(kernel_threads(),
                                           static_cast<unsigned>(std::max<std::uint64_t>(nblocks, 1)));
    auto run_block = [&](std::uint64_t bi) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            const std::uint64_t end = std::min(samples, (bi + 1) * block);
            for (std::uint64_t k = bi * block; k < end; ++k) run_sample(k);
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    };
    if (nt <= 1) {
        for (std::uint64_t bi = 0; bi < nblocks; ++bi) run_block(bi);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::uint64_t bi = next.fetch_add(1);
                    if (bi >= nblocks) break;
                    run_block(bi);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(error);

    // Directional writhes are small integers; moments are exact in int64.
    long long sum = 0, sum2 = 0;
    std::uint64_t perturbed = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        sum += omega[k];
        sum2 += static_cast<long long>(omega[k]) * omega[k];
        perturbed += retries[k];
    }
    MonteCarloEstimate out;
    out.samples = samples;
    out.perturbed_draws = perturbed;
    const double n = static_cast<double>(samples);
    out.estimate = static_cast<double>(sum) / n;
    if (samples > 1) {
        const double var =
            (static_cast<double>(sum2) - n * out.estimate * out.estimate) / (n - 1.0);
        out.stderr_ = var > 0.0 ? std::sqrt(var / n) : 0.0;
    }
    return out;
}

}  // namespace writhe_lab
