#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "holo/loopdomain.hpp"
#include "holo/params.hpp"
#include "holo/weights.hpp"

using namespace holo;
constexpr double pi = std::numbers::pi;

namespace {

// Unpruned oracle: assign all 9 states to every vertex and keep the
// assignments where adjacent vertices agree on every shared edge and no
// occupied leg pokes through the boundary.  Completely independent of the
// backtracking enumerator's constraint propagation.
std::vector<std::vector<uint8_t>> brute_force_closed_configs(const SquareDomain& dom) {
    const int V = dom.vertex_count();
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> st(static_cast<size_t>(V));
    const long total = static_cast<long>(std::pow(9.0, V));
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int k = 0; k < V; ++k) {
            st[static_cast<size_t>(k)] = static_cast<uint8_t>(c % 9);
            c /= 9;
        }
        bool ok = true;
        for (int y = 0; y < dom.height() && ok; ++y)
            for (int x = 0; x < dom.width() && ok; ++x) {
                const Vertex v{x, y};
                const uint8_t mask = kVertexStates[st[static_cast<size_t>(y * dom.width() + x)]].mask;
                for (int leg = 0; leg < 4 && ok; ++leg) {
                    const bool occ = mask & (1 << leg);
                    const auto nb = dom.neighbor(v, leg);
                    if (!nb) {
                        if (occ) ok = false;
                    } else {
                        const uint8_t nmask =
                            kVertexStates[st[static_cast<size_t>(nb->y * dom.width() + nb->x)]].mask;
                        if (occ != static_cast<bool>(nmask & (1 << ((leg + 2) % 4)))) ok = false;
                    }
                }
            }
        if (ok) out.push_back(st);
    }
    std::sort(out.begin(), out.end());
    return out;
}

LoopWeights isotropic_weights() { return compute_weights(pi / 8, 3 * pi / 16); }

MidEdge south_source(const SquareDomain& dom) { return dom.mid_edge(Vertex{0, 0}, LegS); }

} // namespace

TEST_CASE("vertex state table is self-consistent") {
    for (const VertexState& s : kVertexStates) {
        for (int leg = 0; leg < 4; ++leg) {
            const bool occ = s.mask & (1 << leg);
            if (occ) {
                const int p = s.partner[static_cast<size_t>(leg)];
                REQUIRE(p >= 0);
                CHECK(s.partner[static_cast<size_t>(p)] == leg);
                CHECK(static_cast<bool>(s.mask & (1 << p)));
            } else {
                CHECK(s.partner[static_cast<size_t>(leg)] == -1);
            }
        }
    }
    // exactly one empty, six single-line, two double-elbow states
    int by_popcount[5] = {};
    for (const VertexState& s : kVertexStates) ++by_popcount[__builtin_popcount(s.mask)];
    CHECK(by_popcount[0] == 1);
    CHECK(by_popcount[2] == 6);
    CHECK(by_popcount[4] == 2);
}

TEST_CASE("build_domain geometry") {
    const SquareDomain d1(1, 1, pi / 2);
    CHECK(d1.vertex_count() == 1);
    CHECK(d1.mid_edges().size() == 4);
    CHECK(d1.boundary_mid_edges().size() == 4);

    const SquareDomain d3(3, 3, pi / 2);
    CHECK(d3.vertex_count() == 9);
    int interior = 0;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) interior += d3.is_interior(Vertex{x, y}) ? 1 : 0;
    CHECK(interior == 1);
    CHECK(d3.is_interior(Vertex{1, 1}));

    CHECK_THROWS_AS(SquareDomain(0, 2, pi / 2), std::domain_error);
    CHECK_THROWS_AS(SquareDomain(2, 2, 0.0), std::domain_error);
}

TEST_CASE("rhombic embedding positions") {
    const double theta = pi / 3;
    const SquareDomain d(2, 3, theta);
    // recompute from elementary trigonometry
    const Complex up{std::cos(theta), std::sin(theta)};
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 2; ++x) {
            const Complex expect = static_cast<double>(x) + static_cast<double>(y) * up;
            CHECK(std::abs(d.vertex_pos(Vertex{x, y}) - expect) < 1e-15);
        }
    const MidEdge east = d.mid_edge(Vertex{0, 1}, LegE);
    CHECK(std::abs(d.mid_edge_pos(east) - (up + 0.5)) < 1e-15);
    const MidEdge north = d.mid_edge(Vertex{1, 0}, LegN);
    CHECK(std::abs(d.mid_edge_pos(north) - (1.0 + 0.5 * up)) < 1e-15);
    // W leg of (1,0) and E leg of (0,0) are the same normalized mid-edge
    CHECK(d.mid_edge(Vertex{1, 0}, LegW) == d.mid_edge(Vertex{0, 0}, LegE));
}

TEST_CASE("1x1 closed enumeration has exactly the empty configuration") {
    const SquareDomain d(1, 1, pi / 2);
    int count = 0;
    enumerate_configs(d, std::nullopt, std::nullopt, [&](const DomainConfig& cfg) {
        ++count;
        CHECK(cfg.states[0] == 0);
        CHECK(cfg.loops == 0);
        CHECK(cfg.m[0] == 1);
    });
    CHECK(count == 1);
}

TEST_CASE("1x1 with west source, east sink passes a straight line") {
    const SquareDomain d(1, 1, pi / 2);
    const MidEdge w = d.mid_edge(Vertex{0, 0}, LegW);
    const MidEdge e = d.mid_edge(Vertex{0, 0}, LegE);
    std::vector<uint8_t> states;
    enumerate_configs(d, w, e, [&](const DomainConfig& cfg) {
        states.push_back(cfg.states[0]);
        CHECK(cfg.winding == doctest::Approx(0.0));
    });
    REQUIRE(states.size() == 1);
    CHECK(states[0] == 5); // the WE straight-through state
}

TEST_CASE("pruned enumeration equals the unpruned 9^V oracle") {
    for (auto [w, h] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const SquareDomain d(w, h, pi / 2);
        std::vector<std::vector<uint8_t>> pruned;
        enumerate_configs(d, std::nullopt, std::nullopt,
                          [&](const DomainConfig& cfg) { pruned.push_back(cfg.states); });
        std::sort(pruned.begin(), pruned.end());
        // exactly once each
        CHECK(std::adjacent_find(pruned.begin(), pruned.end()) == pruned.end());
        CHECK(pruned == brute_force_closed_configs(d));
    }
}

TEST_CASE("partition function basics") {
    const LoopWeights w = isotropic_weights();
    const SquareDomain d1(1, 1, pi / 2);
    CHECK(partition_function(d1, w, 0.0) == doctest::Approx(w[0]).epsilon(1e-15));

    CHECK(partition_function(SquareDomain(2, 2, pi / 2), LoopWeights{}, 1.0) == 0.0);
}

TEST_CASE("partition function matches the unpruned oracle on 2x2") {
    const LoopWeights w = isotropic_weights();
    const SquareDomain d(2, 2, pi / 2);
    for (double n : {0.0, 1.0, 1.5}) {
        // oracle: sum over brute-force configs, loops counted by hand-checked
        // structure (on 2x2 the only non-empty closed config is the single
        // plaquette loop of four elbows)
        double expect = 0.0;
        for (const auto& st : brute_force_closed_configs(d)) {
            double prod = 1.0;
            int occupied = 0;
            for (uint8_t s : st) {
                prod *= w[s];
                occupied += kVertexStates[s].mask ? 1 : 0;
            }
            const int loops = occupied == 4 ? 1 : 0;
            expect += prod * (loops ? n : 1.0);
        }
        CHECK(partition_function(d, w, n) == doctest::Approx(expect).epsilon(1e-14));
    }
    // frozen prototype values at the isotropic point
    CHECK(partition_function(d, w, 0.0) == doctest::Approx(0.856232118381063).epsilon(1e-12));
    CHECK(partition_function(d, w, 1.0) == doctest::Approx(0.880049602423347).epsilon(1e-12));
}

TEST_CASE("partition function is monotone in each weight for non-negative inputs") {
    const SquareDomain d(2, 2, pi / 2);
    LoopWeights w;
    w.rho = {1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.25, 0.25};
    const double base = partition_function(d, w, 0.5);
    for (int i = 0; i < 9; ++i) {
        LoopWeights wb = w;
        wb.rho[static_cast<size_t>(i)] += 0.25;
        CHECK(partition_function(d, wb, 0.5) >= base);
    }
}

TEST_CASE("winding angle of explicit polylines") {
    LatticePath straight{{{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
    CHECK(winding_angle(straight) == doctest::Approx(0.0));
    LatticePath left{{{0, 0}, {1, 0}, {1, 1}}};
    CHECK(winding_angle(left) == doctest::Approx(pi / 2));
    LatticePath loop{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {1, 0}}};
    CHECK(winding_angle(loop) == doctest::Approx(2 * pi));
}

TEST_CASE("1x1 observable against hand enumeration") {
    const double sigma = 5.0 / 8;
    const LoopWeights w = isotropic_weights();
    const SquareDomain d(1, 1, pi / 2);
    const MidEdge src = d.mid_edge(Vertex{0, 0}, LegW);
    const ObservableField f = observable(d, w, 0.0, sigma, src);
    // straight through: rho6, no turn
    CHECK(std::abs(f.at(d.mid_edge(Vertex{0, 0}, LegE)) - Complex{w[5], 0.0}) < 1e-15);
    // left turn to the north mid-edge: rho5 e^{-i sigma pi/2}
    const Complex fn = f.at(d.mid_edge(Vertex{0, 0}, LegN));
    CHECK(std::abs(fn - w[4] * std::polar(1.0, -sigma * pi / 2)) < 1e-15);
    // right turn to the south mid-edge: rho3 e^{+i sigma pi/2}
    const Complex fs = f.at(d.mid_edge(Vertex{0, 0}, LegS));
    CHECK(std::abs(fs - w[2] * std::polar(1.0, sigma * pi / 2)) < 1e-15);
    CHECK(f.values.count(src) == 0);
}

TEST_CASE("observable with trivial phases counts paths") {
    LoopWeights ones;
    ones.rho.fill(1.0);
    const SquareDomain d(2, 2, pi / 2);
    const MidEdge src = south_source(d);
    const ObservableField f = observable(d, ones, 1.0, 0.0, src);
    for (const auto& [m, v] : f.values) {
        CHECK(v.imag() == doctest::Approx(0.0));
        CHECK(v.real() == doctest::Approx(std::round(v.real())).epsilon(1e-12));
        CHECK(v.real() >= 1.0);
    }
}

TEST_CASE("observable homogeneity under weight rescaling") {
    const LoopWeights w = isotropic_weights();
    LoopWeights w2 = w;
    const double alpha = 1.7;
    for (double& r : w2.rho) r *= alpha;
    const SquareDomain d(2, 2, pi / 2);
    const MidEdge src = south_source(d);
    const ObservableField f1 = observable(d, w, 0.0, 5.0 / 8, src);
    const ObservableField f2 = observable(d, w2, 0.0, 5.0 / 8, src);
    const double scale = std::pow(alpha, d.vertex_count());
    for (const auto& [m, v] : f1.values)
        CHECK(std::abs(f2.at(m) - scale * v) < 1e-12 * scale);
}

TEST_CASE("contour identity on the 3x3 domain at the isotropic point") {
    const double lambda = pi / 8, theta = pi / 2;
    const double sigma = spin(lambda);
    const double u = spectral_from_angle(sigma, theta);
    const SquareDomain d(3, 3, theta);
    const MidEdge src = south_source(d);

    const ObservableField f = observable(d, compute_weights(lambda, u), 0.0, sigma, src);
    const Complex r = vertex_contour_residual(d, f, Vertex{1, 1}, theta);
    CHECK(std::abs(r) < 1e-9 * f.max_abs());

    const ObservableField fp = observable(d, compute_weights(lambda, u + 0.2), 0.0, sigma, src);
    const Complex rp = vertex_contour_residual(d, fp, Vertex{1, 1}, theta);
    CHECK(std::abs(rp) > 1e-4 * fp.max_abs());

    CHECK_THROWS_AS(vertex_contour_residual(d, f, Vertex{0, 1}, theta), std::invalid_argument);
}

TEST_CASE("contour identity at an anisotropic point with loops (n > 0)") {
    const double lambda = pi / 5, theta = 2 * pi / 3;
    const double sigma = spin(lambda);
    const double u = spectral_from_angle(sigma, theta);
    const double n = fugacity_from_lambda(lambda);
    const SquareDomain d(3, 3, theta);
    const ObservableField f =
        observable(d, compute_weights(lambda, u), n, sigma, south_source(d));
    const Complex r = vertex_contour_residual(d, f, Vertex{1, 1}, theta);
    CHECK(std::abs(r) < 1e-12 * f.max_abs());
}

TEST_CASE("zero field has zero residual") {
    const SquareDomain d(3, 3, pi / 2);
    ObservableField f;
    f.source = south_source(d);
    CHECK(vertex_contour_residual(d, f, Vertex{1, 1}, pi / 2) == Complex{0.0, 0.0});
}

TEST_CASE("determinism: repeated runs are bit-identical") {
    const LoopWeights w = isotropic_weights();
    const SquareDomain d(2, 3, pi / 2);
    const double z1 = partition_function(d, w, 0.0);
    const double z2 = partition_function(d, w, 0.0);
    CHECK(z1 == z2);
    const ObservableField f1 = observable(d, w, 0.0, 5.0 / 8, south_source(d));
    const ObservableField f2 = observable(d, w, 0.0, 5.0 / 8, south_source(d));
    CHECK(f1.values == f2.values);
}

TEST_CASE("JSON emission is well-formed and stable") {
    const SquareDomain d(2, 2, pi / 2);
    const ObservableField f =
        observable(d, isotropic_weights(), 0.0, 5.0 / 8, south_source(d));
    const std::string j1 = field_to_json(d, f);
    CHECK(j1 == field_to_json(d, f));
    CHECK(j1.find("\"source\"") != std::string::npos);
    CHECK(j1.find("\"values\"") != std::string::npos);

    const SquareDomain d3(3, 3, pi / 2);
    const ObservableField f3 =
        observable(d3, isotropic_weights(), 0.0, 5.0 / 8, south_source(d3));
    const std::string rj = residual_table_to_json(d3, f3, pi / 2);
    CHECK(rj.find("\"1,1\"") != std::string::npos);
}

TEST_CASE("enumerate_configs argument validation") {
    const SquareDomain d(2, 2, pi / 2);
    const MidEdge s = south_source(d);
    CHECK_THROWS_AS(enumerate_configs(d, s, std::nullopt, [](const DomainConfig&) {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(enumerate_configs(d, s, s, [](const DomainConfig&) {}),
                    std::invalid_argument);
    const MidEdge internal = d.mid_edge(Vertex{0, 0}, LegE);
    CHECK_THROWS_AS(enumerate_configs(d, internal, s, [](const DomainConfig&) {}),
                    std::invalid_argument);
}
