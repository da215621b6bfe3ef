#ifndef HOLO_LOOPDOMAIN_HPP
#define HOLO_LOOPDOMAIN_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holo/params.hpp"
#include "holo/weights.hpp"

namespace holo {

// Legs of a square-lattice vertex, counterclockwise from east.
enum Leg : int { LegE = 0, LegN = 1, LegW = 2, LegS = 3 };

struct Vertex {
    int x = 0, y = 0;
    friend bool operator==(Vertex a, Vertex b) { return a.x == b.x && a.y == b.y; }
    friend auto operator<=>(Vertex a, Vertex b) = default;
};

// Mid-edge identifier, normalized so each edge has a unique owner: internal
// W/S legs are rewritten to the E/N leg of the adjacent vertex.
struct MidEdge {
    Vertex v;
    int leg = 0;
    friend bool operator==(const MidEdge&, const MidEdge&) = default;
    friend auto operator<=>(const MidEdge&, const MidEdge&) = default;
};

// The nine local vertex states.  `mask` has bit (1<<leg) set for occupied
// legs; `partner[leg]` is the leg connected through the vertex (-1 if free).
// The state order matches the weight index rho_{i+1}; the diagram assignment
// (which elbow is which index, which double-elbow is rho8) is pinned by the
// brute-force contour check, see kVertexStates in loopdomain.cpp.
struct VertexState {
    uint8_t mask;
    std::array<int8_t, 4> partner;
};
extern const std::array<VertexState, 9> kVertexStates;

// A finite width x height patch of the square lattice with rhombic embedding
// angle theta: vertex (x, y) sits at x + y * e^{i theta}.
class SquareDomain {
public:
    SquareDomain(int width, int height, double theta);

    int width() const { return width_; }
    int height() const { return height_; }
    double theta() const { return theta_; }
    int vertex_count() const { return width_ * height_; }

    bool contains(Vertex v) const {
        return v.x >= 0 && v.x < width_ && v.y >= 0 && v.y < height_;
    }
    // Interior: all four neighbors present.
    bool is_interior(Vertex v) const {
        return v.x > 0 && v.x < width_ - 1 && v.y > 0 && v.y < height_ - 1;
    }
    std::optional<Vertex> neighbor(Vertex v, int leg) const;

    Complex leg_dir(int leg) const { return dirs_[static_cast<size_t>(leg)]; }
    Complex vertex_pos(Vertex v) const;
    Complex mid_edge_pos(const MidEdge& m) const;

    // Normalized mid-edge id for leg `leg` of vertex `v`.
    MidEdge mid_edge(Vertex v, int leg) const;
    bool is_boundary(const MidEdge& m) const;

    std::vector<MidEdge> mid_edges() const;
    std::vector<MidEdge> boundary_mid_edges() const;

private:
    int width_, height_;
    double theta_;
    std::array<Complex, 4> dirs_;
};

// One loop configuration: per-vertex states (row-major), the weight-index
// histogram m, the closed-loop count, and (when a source/sink pair was set)
// the winding angle of the open path.
struct DomainConfig {
    std::vector<uint8_t> states;
    std::array<int, 9> m{};
    int loops = 0;
    bool has_path = false;
    double winding = 0.0;
};

// Enumerates every edge-consistent configuration exactly once, in a fixed
// (row-major, state-index) order.  With source and sink set (both boundary
// or sink internal), yields exactly the configurations with one open path
// source -> sink plus closed loops; the sink edge is half-occupied when
// internal.  Source and sink must be given together.
void enumerate_configs(const SquareDomain& dom,
                       std::optional<MidEdge> source,
                       std::optional<MidEdge> sink,
                       const std::function<void(const DomainConfig&)>& visit);

// Z = sum over closed configurations of prod_i rho_i^{m_i} * n^P, accumulated
// with compensated summation in the fixed enumeration order.
double partition_function(const SquareDomain& dom, const LoopWeights& w, double n);

// A polyline through mid-edge / vertex positions; winding_angle returns the
// total signed turn (counterclockwise positive).
struct LatticePath {
    std::vector<Complex> points;
};
double winding_angle(const LatticePath& path);

struct ObservableField {
    MidEdge source;
    LoopWeights weights;
    double n = 0.0;
    double sigma = 0.0;
    std::map<MidEdge, Complex> values;

    Complex at(const MidEdge& m) const; // 0 for unreachable mid-edges
    double max_abs() const;
};

// F(z) = sum over configurations with an open path source -> z of
// e^{-i sigma W} prod rho_i^{m_i} n^P, for every mid-edge z != source that is
// reachable by at least one path.  The empty path is excluded.
ObservableField observable(const SquareDomain& dom, const LoopWeights& w,
                           double n, double sigma, const MidEdge& source);

// Discrete contour residual F(p) - phi F(q) - F(r) + phi F(s) at an interior
// vertex, with (p, q, r, s) = (east, south, west, north) mid-edges and
// phi = e^{i (pi - theta)}.  The labeling and the complementary angle are the
// empirically pinned convention under which the residual vanishes for the
// critical weights (same angle convention as holo_residuals).
Complex vertex_contour_residual(const SquareDomain& dom, const ObservableField& field,
                                Vertex v, double theta);

// JSON emission: mid-edge coordinates -> [re, im]; per-vertex residuals.
std::string field_to_json(const SquareDomain& dom, const ObservableField& field);
std::string residual_table_to_json(const SquareDomain& dom, const ObservableField& field,
                                   double theta);

} // namespace holo

#endif
