#include "holo/sawlattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "holo/errors.hpp"

namespace holo {

namespace {

const double kSqrt2 = std::sqrt(2.0);

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw CountOverflowError("walk count overflows 64-bit range");
    return r;
}

double bisect_root(double (*f)(double, double), double target, double lo, double hi) {
    // f increasing on [lo, hi]
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid, target) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::array<HexVertex, 3> hex_neighbors(HexVertex v) {
    const int par = ((v.x + v.y) % 2 + 2) % 2;
    return {HexVertex{v.x - 1, v.y}, HexVertex{v.x + 1, v.y},
            HexVertex{v.x, v.y + (par == 0 ? 1 : -1)}};
}

Complex hex_position(HexVertex v) {
    const int par = ((v.x + v.y) % 2 + 2) % 2;
    const double sq32 = std::sqrt(3.0) / 2.0;
    return {v.x * sq32, 1.5 * v.y - (par ? 0.5 : 0.0)};
}

// ---------------------------------------------------------------------------
// walk counting

namespace {

// Unified vertex id for the three lattices: honeycomb site (x, y) with a
// sublabel (0..2 = triangle corner toward neighbor d, 3 = plain site).
struct LVertex {
    int x, y;
    int sub;
};

// reverse direction index: hex_neighbors(w)[rd] == v when hex_neighbors(v)[d] == w
constexpr int kRev[3] = {1, 0, 2};

struct Walker {
    LatticeKind kind;
    int max_len;
    int span;                  // coordinate offset
    std::vector<uint8_t> vis;  // flat visited grid
    std::vector<int64_t> counts;
    std::atomic<uint64_t>* steps;
    uint64_t budget;

    Walker(LatticeKind k, int ml, std::atomic<uint64_t>* st, uint64_t bud)
        : kind(k), max_len(ml), span(ml + 2),
          vis(static_cast<size_t>((2 * span + 1) * (2 * span + 1) * 4)),
          counts(static_cast<size_t>(ml + 1)), steps(st), budget(bud) {}

    size_t id(const LVertex& v) const {
        return static_cast<size_t>(((v.y + span) * (2 * span + 1) + (v.x + span)) * 4 + v.sub);
    }

    int neighbors(const LVertex& v, LVertex out[3]) const {
        const auto hn = hex_neighbors(HexVertex{v.x, v.y});
        switch (kind) {
        case LatticeKind::Honeycomb:
            for (int d = 0; d < 3; ++d) out[d] = {hn[static_cast<size_t>(d)].x, hn[static_cast<size_t>(d)].y, 3};
            return 3;
        case LatticeKind::ThreeTwelve: {
            const int d = v.sub;
            out[0] = {v.x, v.y, (d + 1) % 3};
            out[1] = {v.x, v.y, (d + 2) % 3};
            out[2] = {hn[static_cast<size_t>(d)].x, hn[static_cast<size_t>(d)].y, kRev[d]};
            return 3;
        }
        case LatticeKind::Martini: {
            const bool even = ((v.x + v.y) % 2 + 2) % 2 == 0;
            if (even) { // triangle site
                const int d = v.sub;
                out[0] = {v.x, v.y, (d + 1) % 3};
                out[1] = {v.x, v.y, (d + 2) % 3};
                out[2] = {hn[static_cast<size_t>(d)].x, hn[static_cast<size_t>(d)].y, 3};
            } else { // plain site, all neighbors are triangle corners
                for (int d = 0; d < 3; ++d)
                    out[d] = {hn[static_cast<size_t>(d)].x, hn[static_cast<size_t>(d)].y, kRev[d]};
            }
            return 3;
        }
        }
        return 0;
    }

    void dfs(const LVertex& v, int depth) {
        if (depth == max_len) return;
        LVertex nb[3];
        const int deg = neighbors(v, nb);
        for (int i = 0; i < deg; ++i) {
            const size_t wid = id(nb[i]);
            if (vis[wid]) continue;
            if (steps->fetch_add(1, std::memory_order_relaxed) >= budget)
                throw BudgetExceededError("enumerate_saws: step budget exceeded");
            counts[static_cast<size_t>(depth + 1)] =
                checked_add(counts[static_cast<size_t>(depth + 1)], 1);
            vis[wid] = 1;
            dfs(nb[i], depth + 1);
            vis[wid] = 0;
        }
    }
};

LVertex lattice_origin(LatticeKind kind) {
    return kind == LatticeKind::Honeycomb ? LVertex{0, 0, 3} : LVertex{0, 0, 0};
}

} // namespace

SawSeries enumerate_saws(LatticeKind kind, int max_len, uint64_t step_budget, int workers) {
    if (max_len < 1) throw std::domain_error("enumerate_saws: max_len must be >= 1");
    std::atomic<uint64_t> steps{0};
    const LVertex origin = lattice_origin(kind);

    SawSeries series;
    series.kind = kind;
    series.counts.assign(static_cast<size_t>(max_len), 0);

    if (workers <= 1 || max_len <= 2) {
        Walker w(kind, max_len, &steps, step_budget);
        w.vis[w.id(origin)] = 1;
        w.dfs(origin, 0);
        std::copy(w.counts.begin() + 1, w.counts.end(), series.counts.begin());
        return series;
    }

    // split on two-step prefixes
    struct Prefix { LVertex v1, v2; };
    std::vector<Prefix> prefixes;
    {
        Walker probe(kind, max_len, &steps, step_budget);
        LVertex n1[3], n2[3];
        const int d1 = probe.neighbors(origin, n1);
        series.counts[0] = d1;
        for (int i = 0; i < d1; ++i) {
            const int d2 = probe.neighbors(n1[i], n2);
            for (int j = 0; j < d2; ++j) {
                if (probe.id(n2[j]) == probe.id(origin)) continue;
                series.counts[1] = checked_add(series.counts[1], 1);
                prefixes.push_back({n1[i], n2[j]});
            }
        }
    }

    const int nthreads = std::min<int>(workers, static_cast<int>(prefixes.size()));
    std::vector<std::vector<int64_t>> partial(static_cast<size_t>(nthreads));
    std::vector<std::thread> threads;
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex err_mu;

    for (int t = 0; t < nthreads; ++t) {
        threads.emplace_back([&, t] {
            Walker w(kind, max_len, &steps, step_budget);
            try {
                for (;;) {
                    const size_t k = next.fetch_add(1);
                    if (k >= prefixes.size() || failed.load()) break;
                    const auto& p = prefixes[k];
                    w.vis[w.id(origin)] = 1;
                    w.vis[w.id(p.v1)] = 1;
                    w.vis[w.id(p.v2)] = 1;
                    w.dfs(p.v2, 2);
                    w.vis[w.id(origin)] = 0;
                    w.vis[w.id(p.v1)] = 0;
                    w.vis[w.id(p.v2)] = 0;
                }
            } catch (const std::exception& e) {
                failed.store(true);
                std::lock_guard<std::mutex> lk(err_mu);
                if (error_msg.empty()) error_msg = e.what();
            }
            partial[static_cast<size_t>(t)] = std::move(w.counts);
        });
    }
    for (auto& th : threads) th.join();
    if (failed.load()) throw BudgetExceededError(error_msg);

    for (const auto& pc : partial)
        for (int len = 3; len <= max_len; ++len)
            series.counts[static_cast<size_t>(len - 1)] = checked_add(
                series.counts[static_cast<size_t>(len - 1)], pc[static_cast<size_t>(len)]);
    return series;
}

double connective_constant_estimate(const SawSeries& series, MuEstimator method) {
    const int N = series.max_len();
    if (method == MuEstimator::RawRatio) {
        if (N < 6) throw std::domain_error("connective_constant_estimate: need >= 6 counts");
        return static_cast<double>(series.at(N)) / static_cast<double>(series.at(N - 1));
    }
    if (N < 10) throw std::domain_error("connective_constant_estimate: need >= 10 counts");
    // least-squares fit of r_N = a + b/N over the top half of the series
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (int len = 2; len <= N; ++len) {
        if (2 * len <= N) continue;
        const double xr = 1.0 / static_cast<double>(len);
        const double yr = static_cast<double>(series.at(len)) / static_cast<double>(series.at(len - 1));
        s1 += 1.0; sx += xr; sxx += xr * xr; sy += yr; sxy += xr * yr;
    }
    const double det = s1 * sxx - sx * sx;
    return (sy * sxx - sx * sxy) / det;
}

double mu_honeycomb() { return std::sqrt(2.0 + kSqrt2); }
double honeycomb_xc() { return 1.0 / mu_honeycomb(); }

double mu_three_twelve() {
    const double s = bisect_root(
        [](double t, double rhs) { return t * t + t * t * t - rhs; },
        1.0 / std::sqrt(2.0 + std::sqrt(2.0)), 0.0, 1.0);
    return 1.0 / s;
}

double mu_martini(bool literal_printed_rhs) {
    const double rhs = literal_printed_rhs ? 1.0 / std::sqrt(2.0 + kSqrt2) : 1.0 / (2.0 + kSqrt2);
    const double s = bisect_root(
        [](double t, double r) { return t * t * t + t * t * t * t - r; }, rhs, 0.0, 1.0);
    return 1.0 / s;
}

// ---------------------------------------------------------------------------
// honeycomb patch observable

HoneycombPatch::HoneycombPatch(int nx, int ny) : nx_(nx), ny_(ny) {
    if (nx < 1 || ny < 1) throw std::domain_error("HoneycombPatch: empty window");
}

bool HoneycombPatch::is_interior(HexVertex v) const {
    if (!contains(v)) return false;
    for (const HexVertex& w : hex_neighbors(v))
        if (!contains(w)) return false;
    return true;
}

int HoneycombPatch::hexagon_count() const {
    // hexagon corners {(x..x+2) x (y..y+1)} with x+y even
    int c = 0;
    for (int y = 0; y + 1 < ny_; ++y)
        for (int x = 0; x + 2 < nx_; ++x)
            if ((x + y) % 2 == 0) ++c;
    return c;
}

std::vector<HexVertex> HoneycombPatch::vertices() const {
    std::vector<HexVertex> out;
    for (int y = 0; y < ny_; ++y)
        for (int x = 0; x < nx_; ++x) out.push_back(HexVertex{x, y});
    return out;
}

HexMidEdge hex_mid_edge(HexVertex u, HexVertex w) {
    return u < w ? HexMidEdge{u, w} : HexMidEdge{w, u};
}

Complex hex_mid_edge_pos(const HexMidEdge& m) {
    return 0.5 * (hex_position(m.a) + hex_position(m.b));
}

Complex SawObservableField::at(const HexMidEdge& m) const {
    auto it = values.find(m);
    return it == values.end() ? Complex{0.0, 0.0} : it->second;
}

double SawObservableField::max_abs() const {
    double m = 0.0;
    for (const auto& [k, v] : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

struct SawFieldBuilder {
    const HoneycombPatch& patch;
    double x, sigma;
    std::map<HexMidEdge, Complex> values;
    std::map<HexVertex, bool> visited;

    // At vertex v, arrived from prev along direction indir, having visited
    // `depth` vertices and accumulated winding `wind`.  A walk may terminate
    // at the midpoint of any incident edge except the one just traversed;
    // the far endpoint may be visited or outside the patch (the terminating
    // half-edge stops before it).
    void extend(HexVertex v, HexVertex prev, Complex indir, double wind, int depth) {
        for (const HexVertex& w : hex_neighbors(v)) {
            if (w == prev) continue;
            const Complex outdir = hex_position(w) - hex_position(v);
            const double nw = wind + std::arg(outdir / indir);
            values[hex_mid_edge(v, w)] +=
                std::pow(x, depth) * std::polar(1.0, -sigma * nw);
            if (patch.contains(w) && !visited[w]) {
                visited[w] = true;
                extend(w, v, outdir, nw, depth + 1);
                visited[w] = false;
            }
        }
    }
};

} // namespace

SawObservableField saw_observable(const HoneycombPatch& patch, double x, double sigma,
                                  HexVertex entry, HexVertex outside) {
    if (!patch.contains(entry) || patch.contains(outside))
        throw std::invalid_argument("saw_observable: source must be a boundary half-edge");
    const auto nbs = hex_neighbors(entry);
    if (std::find(nbs.begin(), nbs.end(), outside) == nbs.end())
        throw std::invalid_argument("saw_observable: entry and outside are not adjacent");

    SawFieldBuilder b{patch, x, sigma, {}, {}};
    b.visited[entry] = true;
    b.extend(entry, outside, hex_position(entry) - hex_position(outside), 0.0, 1);

    SawObservableField field;
    field.entry = entry;
    field.outside = outside;
    field.x = x;
    field.sigma = sigma;
    field.values = std::move(b.values);
    return field;
}

Complex saw_vertex_residual(const HoneycombPatch& patch, const SawObservableField& field,
                            HexVertex v) {
    if (!patch.is_interior(v))
        throw std::invalid_argument("saw_vertex_residual: vertex must be interior");
    Complex tot = 0.0;
    const Complex vp = hex_position(v);
    for (const HexVertex& w : hex_neighbors(v)) {
        const HexMidEdge m = hex_mid_edge(v, w);
        tot += (hex_mid_edge_pos(m) - vp) * field.at(m);
    }
    return tot;
}

// ---------------------------------------------------------------------------
// half-plane surface series

SawSeries surface_saw_series(Orientation orientation, int max_len, uint64_t step_budget) {
    if (max_len < 1) throw std::domain_error("surface_saw_series: max_len must be >= 1");
    const bool horiz = orientation == Orientation::A;
    auto in_half = [&](HexVertex v) { return horiz ? v.y >= 0 : v.x >= 0; };
    auto contact = [&](HexVertex v) { return horiz ? v.y == 0 : v.x == 0; };

    SawSeries series;
    series.kind = LatticeKind::Honeycomb;
    series.counts.assign(static_cast<size_t>(max_len), 0);
    series.surface_poly.assign(static_cast<size_t>(max_len), {});

    uint64_t steps = 0;
    std::map<HexVertex, bool> visited;
    visited[HexVertex{0, 0}] = true;

    auto bump = [&](int len, int k) {
        auto& poly = series.surface_poly[static_cast<size_t>(len - 1)];
        if (static_cast<int>(poly.size()) <= k) poly.resize(static_cast<size_t>(k + 1), 0);
        poly[static_cast<size_t>(k)] = checked_add(poly[static_cast<size_t>(k)], 1);
        series.counts[static_cast<size_t>(len - 1)] =
            checked_add(series.counts[static_cast<size_t>(len - 1)], 1);
    };

    auto rec = [&](auto&& self, HexVertex v, int depth, int k) -> void {
        if (depth == max_len) return;
        for (const HexVertex& w : hex_neighbors(v)) {
            if (!in_half(w) || visited[w]) continue;
            if (++steps > step_budget)
                throw BudgetExceededError("surface_saw_series: step budget exceeded");
            const int nk = k + (contact(w) ? 1 : 0);
            bump(depth + 1, nk);
            visited[w] = true;
            self(self, w, depth + 1, nk);
            visited[w] = false;
        }
    };
    rec(rec, HexVertex{0, 0}, 0, 0);
    return series;
}

double critical_fugacity(Orientation orientation) {
    if (orientation == Orientation::A) return 1.0 + kSqrt2;
    return std::sqrt((2.0 + kSqrt2) / (1.0 + kSqrt2 - std::sqrt(2.0 + kSqrt2)));
}

// ---------------------------------------------------------------------------
// emission

namespace {
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
const char* lattice_name(LatticeKind k) {
    switch (k) {
    case LatticeKind::Honeycomb: return "honeycomb";
    case LatticeKind::ThreeTwelve: return "3-12";
    case LatticeKind::Martini: return "martini";
    }
    return "?";
}
} // namespace

std::string series_to_csv(const SawSeries& series) {
    std::string out = "N,c_N\n";
    for (int len = 1; len <= series.max_len(); ++len)
        out += std::to_string(len) + "," + std::to_string(series.at(len)) + "\n";
    return out;
}

std::string series_to_json(const SawSeries& series) {
    std::string out = "{\n  \"lattice\": \"";
    out += lattice_name(series.kind);
    out += "\",\n  \"counts\": [";
    for (int len = 1; len <= series.max_len(); ++len) {
        if (len > 1) out += ", ";
        out += std::to_string(series.at(len));
    }
    out += "]";
    if (!series.surface_poly.empty()) {
        out += ",\n  \"surface_poly\": [";
        for (size_t i = 0; i < series.surface_poly.size(); ++i) {
            if (i) out += ", ";
            out += "[";
            const auto& p = series.surface_poly[i];
            for (size_t j = 0; j < p.size(); ++j) {
                if (j) out += ", ";
                out += std::to_string(p[j]);
            }
            out += "]";
        }
        out += "]";
    }
    out += "\n}\n";
    return out;
}

std::string saw_field_to_json(const SawObservableField& field) {
    std::string out = "{\n  \"source\": [";
    const Complex sp = 0.5 * (hex_position(field.entry) + hex_position(field.outside));
    out += fmt_double(sp.real()) + std::string(", ") + fmt_double(sp.imag()) + "],\n  \"values\": {";
    bool first = true;
    for (const auto& [m, val] : field.values) {
        const Complex p = hex_mid_edge_pos(m);
        out += first ? "\n" : ",\n";
        first = false;
        out += "    \"" + fmt_double(p.real()) + "," + fmt_double(p.imag()) + "\": [" +
               fmt_double(val.real()) + ", " + fmt_double(val.imag()) + "]";
    }
    out += "\n  }\n}\n";
    return out;
}

} // namespace holo
