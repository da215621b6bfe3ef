#include "holo/loopdomain.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace holo {

namespace {
constexpr double kPi = std::numbers::pi;

inline int reverse_leg(int leg) { return (leg + 2) % 4; }

// Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

struct KahanC {
    Kahan re, im;
    void add(Complex z) { re.add(z.real()); im.add(z.imag()); }
    Complex value() const { return {re.value(), im.value()}; }
};

constexpr uint8_t M(int a) { return static_cast<uint8_t>(1 << a); }
constexpr uint8_t M(int a, int b) { return static_cast<uint8_t>((1 << a) | (1 << b)); }

} // namespace

// State i carries weight rho_{i+1}.  The diagram assignment is pinned by the
// requirement that the brute-force contour residual of the observable
// vanishes for compute_weights at u = sigma(theta-pi)+theta (checked in the
// tests at isotropic and anisotropic points; the anisotropic point separates
// every remaining candidate):
//   0 empty | 1 NE elbow, 2 SW elbow | 3 ES elbow, 4 WN elbow |
//   5 WE straight, 6 NS straight | 7 double elbow (N-E, S-W) |
//   8 double elbow (N-W, S-E)
// In particular the straight-through states carry rho6 = rho7, not rho2.
const std::array<VertexState, 9> kVertexStates = {{
    {0, {-1, -1, -1, -1}},                        // empty
    {M(LegN, LegE), {LegN, LegE, -1, -1}},        // NE
    {M(LegS, LegW), {-1, -1, LegS, LegW}},        // SW
    {M(LegE, LegS), {LegS, -1, -1, LegE}},        // ES
    {M(LegW, LegN), {-1, LegW, LegN, -1}},        // WN
    {M(LegW, LegE), {LegW, -1, LegE, -1}},        // WE
    {M(LegN, LegS), {-1, LegS, -1, LegN}},        // NS
    {static_cast<uint8_t>(0xF), {LegN, LegE, LegS, LegW}}, // N-E and S-W
    {static_cast<uint8_t>(0xF), {LegS, LegW, LegN, LegE}}, // N-W and S-E
}};

SquareDomain::SquareDomain(int width, int height, double theta)
    : width_(width), height_(height), theta_(theta) {
    if (width < 1 || height < 1)
        throw std::domain_error("SquareDomain: width and height must be >= 1");
    if (!(theta > 0.0 && theta < kPi))
        throw std::domain_error("SquareDomain: theta must lie in (0, pi)");
    const Complex up = std::polar(1.0, theta);
    dirs_ = {Complex{1.0, 0.0}, up, Complex{-1.0, 0.0}, -up};
}

std::optional<Vertex> SquareDomain::neighbor(Vertex v, int leg) const {
    static constexpr int dx[4] = {1, 0, -1, 0};
    static constexpr int dy[4] = {0, 1, 0, -1};
    Vertex w{v.x + dx[leg], v.y + dy[leg]};
    if (!contains(w)) return std::nullopt;
    return w;
}

Complex SquareDomain::vertex_pos(Vertex v) const {
    return static_cast<double>(v.x) + static_cast<double>(v.y) * dirs_[1];
}

MidEdge SquareDomain::mid_edge(Vertex v, int leg) const {
    auto nb = neighbor(v, leg);
    if (nb && (leg == LegW || leg == LegS)) return MidEdge{*nb, reverse_leg(leg)};
    return MidEdge{v, leg};
}

Complex SquareDomain::mid_edge_pos(const MidEdge& m) const {
    return vertex_pos(m.v) + 0.5 * dirs_[static_cast<size_t>(m.leg)];
}

bool SquareDomain::is_boundary(const MidEdge& m) const {
    return !neighbor(m.v, m.leg).has_value();
}

std::vector<MidEdge> SquareDomain::mid_edges() const {
    std::vector<MidEdge> out;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            for (int leg = 0; leg < 4; ++leg) {
                Vertex v{x, y};
                if (leg == LegE || leg == LegN || !neighbor(v, leg))
                    out.push_back(MidEdge{v, leg});
            }
    return out;
}

std::vector<MidEdge> SquareDomain::boundary_mid_edges() const {
    std::vector<MidEdge> out;
    for (const MidEdge& m : mid_edges())
        if (is_boundary(m)) out.push_back(m);
    return out;
}

namespace {

struct Enumerator {
    const SquareDomain& dom;
    std::optional<MidEdge> source, sink;
    const std::function<void(const DomainConfig&)>& visit;
    std::vector<uint8_t> states;
    std::vector<uint8_t> legseen; // scratch for the analysis pass

    Enumerator(const SquareDomain& d, std::optional<MidEdge> src, std::optional<MidEdge> snk,
               const std::function<void(const DomainConfig&)>& vis)
        : dom(d), source(src), sink(snk), visit(vis),
          states(static_cast<size_t>(d.vertex_count())),
          legseen(static_cast<size_t>(d.vertex_count()) * 4) {}

    int idx(Vertex v) const { return v.y * dom.width() + v.x; }
    bool occupied(Vertex v, int leg) const {
        return kVertexStates[states[static_cast<size_t>(idx(v))]].mask & (1 << leg);
    }

    // Required occupancy of `leg` of `v`, or -1 when still free.  `assigned`
    // holds for raster-earlier vertices.
    int required(Vertex v, int leg) const {
        const MidEdge m = dom.mid_edge(v, leg);
        const auto nb = dom.neighbor(v, leg);
        if (!nb) {
            if ((source && m == *source) || (sink && m == *sink)) return 1;
            return 0;
        }
        const bool nb_assigned = (leg == LegW || leg == LegS);
        if (!nb_assigned) return -1;
        const int occ = occupied(*nb, reverse_leg(leg)) ? 1 : 0;
        if (sink && m == *sink) return 1 - occ; // half-occupied sink edge
        return occ;
    }

    void run() { place(0); }

    void place(int k) {
        if (k == dom.vertex_count()) {
            analyze();
            return;
        }
        Vertex v{k % dom.width(), k / dom.width()};
        int req[4];
        for (int leg = 0; leg < 4; ++leg) req[leg] = required(v, leg);
        for (uint8_t s = 0; s < 9; ++s) {
            const uint8_t mask = kVertexStates[s].mask;
            bool ok = true;
            for (int leg = 0; leg < 4 && ok; ++leg) {
                if (req[leg] >= 0 && ((mask >> leg) & 1) != req[leg]) ok = false;
            }
            if (!ok) continue;
            states[static_cast<size_t>(k)] = s;
            place(k + 1);
        }
    }

    bool seen(Vertex v, int leg) const { return legseen[static_cast<size_t>(idx(v) * 4 + leg)]; }
    void mark(Vertex v, int leg) { legseen[static_cast<size_t>(idx(v) * 4 + leg)] = 1; }

    void analyze() {
        DomainConfig cfg;
        cfg.states = states;
        for (uint8_t s : states) ++cfg.m[s];
        std::fill(legseen.begin(), legseen.end(), 0);

        if (source) {
            cfg.has_path = true;
            Vertex v = source->v;
            int leg = source->leg;
            for (;;) {
                const Complex indir = -dom.leg_dir(leg);
                const int out = kVertexStates[states[static_cast<size_t>(idx(v))]]
                                    .partner[static_cast<size_t>(leg)];
                assert(out >= 0);
                cfg.winding += std::arg(dom.leg_dir(out) / indir);
                mark(v, leg);
                mark(v, out);
                const auto nb = dom.neighbor(v, out);
                if (!nb || !occupied(*nb, reverse_leg(out))) break; // reached the sink mid-edge
                v = *nb;
                leg = reverse_leg(out);
            }
        }
        // remaining occupied structure: closed loops
        for (int k = 0; k < dom.vertex_count(); ++k) {
            Vertex v{k % dom.width(), k / dom.width()};
            for (int leg = 0; leg < 4; ++leg) {
                if (!occupied(v, leg) || seen(v, leg)) continue;
                Vertex cv = v;
                int cl = leg;
                while (!seen(cv, cl)) {
                    mark(cv, cl);
                    const int out = kVertexStates[states[static_cast<size_t>(idx(cv))]]
                                        .partner[static_cast<size_t>(cl)];
                    mark(cv, out);
                    const auto nb = dom.neighbor(cv, out);
                    assert(nb && occupied(*nb, reverse_leg(out)));
                    cv = *nb;
                    cl = reverse_leg(out);
                }
                ++cfg.loops;
            }
        }
        visit(cfg);
    }
};

double config_weight(const DomainConfig& cfg, const LoopWeights& w, double n) {
    double prod = 1.0;
    for (uint8_t s : cfg.states) prod *= w[s];
    if (cfg.loops > 0) prod *= std::pow(n, cfg.loops);
    return prod;
}

} // namespace

void enumerate_configs(const SquareDomain& dom, std::optional<MidEdge> source,
                       std::optional<MidEdge> sink,
                       const std::function<void(const DomainConfig&)>& visit) {
    if (source.has_value() != sink.has_value())
        throw std::invalid_argument("enumerate_configs: source and sink must be given together");
    if (source) {
        if (!dom.is_boundary(*source))
            throw std::invalid_argument("enumerate_configs: source must be a boundary mid-edge");
        if (*source == *sink)
            throw std::invalid_argument("enumerate_configs: source and sink must differ");
    }
    Enumerator e(dom, source, sink, visit);
    e.run();
}

double partition_function(const SquareDomain& dom, const LoopWeights& w, double n) {
    Kahan acc;
    enumerate_configs(dom, std::nullopt, std::nullopt,
                      [&](const DomainConfig& cfg) { acc.add(config_weight(cfg, w, n)); });
    return acc.value();
}

double winding_angle(const LatticePath& path) {
    double w = 0.0;
    for (size_t i = 0; i + 2 < path.points.size(); ++i) {
        const Complex d1 = path.points[i + 1] - path.points[i];
        const Complex d2 = path.points[i + 2] - path.points[i + 1];
        w += std::arg(d2 / d1);
    }
    return w;
}

Complex ObservableField::at(const MidEdge& m) const {
    auto it = values.find(m);
    return it == values.end() ? Complex{0.0, 0.0} : it->second;
}

double ObservableField::max_abs() const {
    double m = 0.0;
    for (const auto& [k, v] : values) m = std::max(m, std::abs(v));
    return m;
}

ObservableField observable(const SquareDomain& dom, const LoopWeights& w, double n,
                           double sigma, const MidEdge& source) {
    if (!dom.is_boundary(source))
        throw std::invalid_argument("observable: source must be a boundary mid-edge");
    ObservableField field;
    field.source = source;
    field.weights = w;
    field.n = n;
    field.sigma = sigma;
    for (const MidEdge& z : dom.mid_edges()) {
        if (z == source) continue; // empty-path term excluded
        KahanC acc;
        long terms = 0;
        enumerate_configs(dom, source, z, [&](const DomainConfig& cfg) {
            ++terms;
            const double wt = config_weight(cfg, w, n);
            acc.add(std::polar(1.0, -sigma * cfg.winding) * wt);
        });
        if (terms > 0) field.values.emplace(z, acc.value());
    }
    return field;
}

Complex vertex_contour_residual(const SquareDomain& dom, const ObservableField& field,
                                Vertex v, double theta) {
    if (!dom.is_interior(v))
        throw std::invalid_argument("vertex_contour_residual: vertex must be interior");
    const Complex phi = std::polar(1.0, kPi - theta);
    const Complex fp = field.at(dom.mid_edge(v, LegE));
    const Complex fq = field.at(dom.mid_edge(v, LegS));
    const Complex fr = field.at(dom.mid_edge(v, LegW));
    const Complex fs = field.at(dom.mid_edge(v, LegN));
    return fp - phi * fq - fr + phi * fs;
}

namespace {
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
std::string fmt_pair(Complex z) {
    return "[" + fmt_double(z.real()) + ", " + fmt_double(z.imag()) + "]";
}
} // namespace

std::string field_to_json(const SquareDomain& dom, const ObservableField& field) {
    std::string out = "{\n  \"source\": " + fmt_pair(dom.mid_edge_pos(field.source)) +
                      ",\n  \"values\": {";
    bool first = true;
    for (const auto& [m, val] : field.values) {
        const Complex p = dom.mid_edge_pos(m);
        out += first ? "\n" : ",\n";
        first = false;
        out += "    \"" + fmt_double(p.real()) + "," + fmt_double(p.imag()) + "\": " + fmt_pair(val);
    }
    out += "\n  }\n}\n";
    return out;
}

std::string residual_table_to_json(const SquareDomain& dom, const ObservableField& field,
                                   double theta) {
    std::string out = "{";
    bool first = true;
    for (int y = 1; y < dom.height() - 1; ++y)
        for (int x = 1; x < dom.width() - 1; ++x) {
            Vertex v{x, y};
            const Complex r = vertex_contour_residual(dom, field, v, theta);
            out += first ? "\n" : ",\n";
            first = false;
            out += "  \"" + std::to_string(x) + "," + std::to_string(y) + "\": " + fmt_pair(r);
        }
    out += "\n}\n";
    return out;
}

} // namespace holo
