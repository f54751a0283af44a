#pragma once

// Metrized reduction graphs with exact rational data: the Laplacian of
// piecewise-linear functions, curvature of model divisors, Dirichlet energy,
// subdivision under ramified base change, and the Haar measure on a circle.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "heightlab/arith.hpp"

namespace heightlab {

struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    Rational length;
};

/// Finite graph with positive rational edge lengths. Parallel edges are
/// allowed; loops are not.
class MetrizedGraph {
public:
    MetrizedGraph(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges);

    std::size_t vertex_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<std::string>& vertex_names() const noexcept { return names_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
    /// Throws InvalidArgument for an unknown name.
    std::size_t index_of(const std::string& name) const;
    Rational total_length() const;
    /// Number of edges between u and v (the m_ij of the intersection pairing).
    std::size_t multiplicity(std::size_t u, std::size_t v) const;
    bool is_cycle() const;

private:
    std::vector<std::string> names_;
    std::vector<GraphEdge> edges_;
};

/// Vertex values; linear along each edge.
struct PLFunction {
    std::vector<Rational> values;
};

struct DivisorTerm {
    Integer coeff;
    std::size_t vertex;
};

/// sum n_j [P_j] recorded through the reduction vertices rho(P_j).
struct VertexDivisor {
    std::vector<DivisorTerm> terms;
    Integer degree() const;
};

struct DiscreteMeasure {
    std::vector<Rational> vertex_mass;
    std::vector<Rational> edge_density; ///< empty, or one uniform density per edge

    Rational total_mass(const MetrizedGraph& g) const;
    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;
};

/// Delta f: mass at u is -sum over edges at u of the outgoing slope.
DiscreteMeasure laplacian_pl(const MetrizedGraph& g, const PLFunction& f);

/// Atomic measure mu_D.
DiscreteMeasure divisor_measure(const MetrizedGraph& g, const VertexDivisor& d);

/// mu_D - Delta f, of total mass deg D. On graphs whose edges all have length
/// 1 the result is cross-checked against the intersection-number formula
/// sum_j n_j [rho(P_j) = V_i] + sum_{j != i} m_ij (f(V_j) - f(V_i)).
DiscreteMeasure curvature(const MetrizedGraph& g, const VertexDivisor& d, const PLFunction& f);

/// The intersection-number form of the curvature (unit edge lengths only).
DiscreteMeasure curvature_unit_formula(const MetrizedGraph& g, const VertexDivisor& d,
                                       const PLFunction& f);

/// E(f) = sum_e length_e * slope_e^2 >= 0. The Dirichlet form in the
/// ddc-normalization is -E(f).
Rational dirichlet_energy(const MetrizedGraph& g, const PLFunction& f);

struct Subdivision {
    MetrizedGraph graph;
    std::vector<std::size_t> vertex_embedding;          ///< old vertex -> new vertex
    std::vector<std::vector<std::size_t>> edge_paths;   ///< old edge -> new vertices u, ..., v
};

/// Replaces every edge by a path of e edges of length l/e (e >= 1).
Subdivision subdivide(const MetrizedGraph& g, int e);

/// Linear extension of f to the subdivided graph.
PLFunction extend_linear(const MetrizedGraph& g, const Subdivision& s, const PLFunction& f);
VertexDivisor push_divisor(const Subdivision& s, const VertexDivisor& d);

/// Uniform density mass / total length on a single cycle; ShapeError otherwise.
DiscreteMeasure circle_haar_measure(const MetrizedGraph& g, const Rational& total_mass);

/// Graph input file: {vertices, edges: [{u, v, length}], divisor: [{coeff,
/// vertex}], f: {vertex: value}}; rationals as "a/b" strings or integers.
struct GraphProblem {
    MetrizedGraph graph;
    VertexDivisor divisor;
    PLFunction f;
};

GraphProblem graph_problem_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const MetrizedGraph& g, const DiscreteMeasure& m);

} // namespace heightlab
