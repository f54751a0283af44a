#include "heightlab/graph.hpp"

#include <algorithm>
#include <numeric>

namespace heightlab {

MetrizedGraph::MetrizedGraph(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw InvalidArgument("duplicate vertex name '" + names_[i] + "'");
    for (const auto& e : edges_) {
        if (e.u >= names_.size() || e.v >= names_.size()) throw InvalidArgument("edge endpoint out of range");
        if (e.u == e.v) throw InvalidArgument("loops are not allowed; subdivide the edge instead");
        if (e.length <= 0) throw InvalidArgument("edge lengths must be positive");
    }
}

std::size_t MetrizedGraph::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InvalidArgument("unknown vertex '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

Rational MetrizedGraph::total_length() const {
    Rational t = 0;
    for (const auto& e : edges_) t += e.length;
    return t;
}

std::size_t MetrizedGraph::multiplicity(std::size_t u, std::size_t v) const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
        return (e.u == u && e.v == v) || (e.u == v && e.v == u);
    }));
}

bool MetrizedGraph::is_cycle() const {
    const std::size_t n = names_.size();
    if (n < 2 || edges_.size() != n) return false;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    if (std::any_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() != 2; })) return false;
    // Connected + 2-regular = one cycle.
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t w : adj[u])
            if (!seen[w]) {
                seen[w] = true;
                ++visited;
                stack.push_back(w);
            }
    }
    return visited == n;
}

Integer VertexDivisor::degree() const {
    Integer d = 0;
    for (const auto& t : terms) d += t.coeff;
    return d;
}

Rational DiscreteMeasure::total_mass(const MetrizedGraph& g) const {
    Rational t = 0;
    for (const auto& m : vertex_mass) t += m;
    for (std::size_t i = 0; i < edge_density.size(); ++i) t += edge_density[i] * g.edges()[i].length;
    return t;
}

namespace {

void check_function(const MetrizedGraph& g, const PLFunction& f) {
    if (f.values.size() != g.vertex_count())
        throw InvalidArgument("PL function must be defined on every vertex");
}

} // namespace

DiscreteMeasure laplacian_pl(const MetrizedGraph& g, const PLFunction& f) {
    check_function(g, f);
    DiscreteMeasure m{std::vector<Rational>(g.vertex_count(), Rational(0)), {}};
    for (const auto& e : g.edges()) {
        const Rational slope = (f.values[e.v] - f.values[e.u]) / e.length; // outgoing at u
        m.vertex_mass[e.u] -= slope;
        m.vertex_mass[e.v] += slope;
    }
    return m;
}

DiscreteMeasure divisor_measure(const MetrizedGraph& g, const VertexDivisor& d) {
    DiscreteMeasure m{std::vector<Rational>(g.vertex_count(), Rational(0)), {}};
    for (const auto& t : d.terms) {
        if (t.vertex >= g.vertex_count()) throw InvalidArgument("divisor reduces to an unknown vertex");
        m.vertex_mass[t.vertex] += t.coeff;
    }
    return m;
}

DiscreteMeasure curvature_unit_formula(const MetrizedGraph& g, const VertexDivisor& d, const PLFunction& f) {
    check_function(g, f);
    for (const auto& e : g.edges())
        if (e.length != 1) throw InvalidArgument("intersection formula needs unit edge lengths");
    DiscreteMeasure m = divisor_measure(g, d);
    const std::size_t n = g.vertex_count();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) m.vertex_mass[i] += Rational(static_cast<long>(g.multiplicity(i, j))) * (f.values[j] - f.values[i]);
    return m;
}

DiscreteMeasure curvature(const MetrizedGraph& g, const VertexDivisor& d, const PLFunction& f) {
    DiscreteMeasure m = divisor_measure(g, d);
    const DiscreteMeasure lap = laplacian_pl(g, f);
    for (std::size_t i = 0; i < m.vertex_mass.size(); ++i) m.vertex_mass[i] -= lap.vertex_mass[i];
    const bool unit = std::all_of(g.edges().begin(), g.edges().end(),
                                  [](const GraphEdge& e) { return e.length == 1; });
    if (unit && !(curvature_unit_formula(g, d, f) == m))
        throw ComputationError("curvature disagrees with the intersection-number formula");
    return m;
}

Rational dirichlet_energy(const MetrizedGraph& g, const PLFunction& f) {
    check_function(g, f);
    Rational e = 0;
    for (const auto& edge : g.edges()) {
        const Rational diff = f.values[edge.v] - f.values[edge.u];
        e += diff * diff / edge.length;
    }
    return e;
}

Subdivision subdivide(const MetrizedGraph& g, int e) {
    if (e < 1) throw InvalidArgument("ramification index must be >= 1");
    std::vector<std::string> names = g.vertex_names();
    std::vector<GraphEdge> edges;
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> embedding(g.vertex_count());
    std::iota(embedding.begin(), embedding.end(), std::size_t{0});
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        const GraphEdge& old = g.edges()[k];
        const Rational piece = old.length / e;
        std::vector<std::size_t> path{old.u};
        for (int j = 1; j < e; ++j) {
            names.push_back("e" + std::to_string(k) + "." + std::to_string(j));
            path.push_back(names.size() - 1);
        }
        path.push_back(old.v);
        for (std::size_t j = 0; j + 1 < path.size(); ++j) edges.push_back({path[j], path[j + 1], piece});
        paths.push_back(std::move(path));
    }
    return {MetrizedGraph(std::move(names), std::move(edges)), std::move(embedding), std::move(paths)};
}

PLFunction extend_linear(const MetrizedGraph& g, const Subdivision& s, const PLFunction& f) {
    check_function(g, f);
    PLFunction out{std::vector<Rational>(s.graph.vertex_count(), Rational(0))};
    for (std::size_t i = 0; i < g.vertex_count(); ++i) out.values[s.vertex_embedding[i]] = f.values[i];
    for (std::size_t k = 0; k < s.edge_paths.size(); ++k) {
        const auto& path = s.edge_paths[k];
        const std::size_t steps = path.size() - 1;
        const Rational& a = f.values[g.edges()[k].u];
        const Rational& b = f.values[g.edges()[k].v];
        for (std::size_t j = 1; j < steps; ++j)
            out.values[path[j]] = a + (b - a) * Rational(static_cast<long>(j)) / Rational(static_cast<long>(steps));
    }
    return out;
}

VertexDivisor push_divisor(const Subdivision& s, const VertexDivisor& d) {
    VertexDivisor out;
    for (const auto& t : d.terms) out.terms.push_back({t.coeff, s.vertex_embedding.at(t.vertex)});
    return out;
}

DiscreteMeasure circle_haar_measure(const MetrizedGraph& g, const Rational& total_mass) {
    if (!g.is_cycle()) throw ShapeError("Haar measure needs a graph that is a single cycle");
    const Rational density = total_mass / g.total_length();
    return {std::vector<Rational>(g.vertex_count(), Rational(0)),
            std::vector<Rational>(g.edge_count(), density)};
}

namespace {

Rational json_rational(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>()), 10));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InvalidArgument("expected an integer or an \"a/b\" string, got " + v.dump());
}

} // namespace

GraphProblem graph_problem_from_json(const nlohmann::json& j) {
    try {
        std::vector<std::string> names = j.at("vertices").get<std::vector<std::string>>();
        auto index = [&](const nlohmann::json& v) {
            const std::string name = v.get<std::string>();
            const auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw InvalidArgument("unknown vertex '" + name + "'");
            return static_cast<std::size_t>(it - names.begin());
        };
        std::vector<GraphEdge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({index(e.at("u")), index(e.at("v")), json_rational(e.at("length"))});
        VertexDivisor div;
        if (j.contains("divisor"))
            for (const auto& t : j.at("divisor"))
                div.terms.push_back({json_rational(t.at("coeff")).get_num(), index(t.at("vertex"))});
        PLFunction f{std::vector<Rational>(names.size(), Rational(0))};
        if (j.contains("f"))
            for (const auto& [name, value] : j.at("f").items()) f.values[index(nlohmann::json(name))] = json_rational(value);
        MetrizedGraph g(std::move(names), std::move(edges));
        return {std::move(g), std::move(div), std::move(f)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed graph file: ") + e.what());
    }
}

nlohmann::json measure_to_json(const MetrizedGraph& g, const DiscreteMeasure& m) {
    nlohmann::json out;
    nlohmann::json masses = nlohmann::json::object();
    for (std::size_t i = 0; i < m.vertex_mass.size(); ++i) masses[g.vertex_names()[i]] = to_string(m.vertex_mass[i]);
    out["vertex_mass"] = masses;
    if (!m.edge_density.empty()) {
        nlohmann::json dens = nlohmann::json::array();
        for (const auto& d : m.edge_density) dens.push_back(to_string(d));
        out["edge_density"] = dens;
    }
    out["total_mass"] = to_string(m.total_mass(g));
    return out;
}

} // namespace heightlab
