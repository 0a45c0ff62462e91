#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "lnf/dynamics.hpp"

namespace lnf {

namespace {

double cost_at(const std::vector<double>& c, int k) {
    if (c.empty()) return 0.0;
    return c[std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), c.size() - 1)];
}

std::vector<double> read_cost(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>()};
    if (j.is_array()) return j.get<std::vector<double>>();
    throw ModelError("cost must be a number or an array");
}

}  // namespace

int TemporalGraph::add_vertex(std::string id, std::vector<double> pos) {
    if (index_of(id) >= 0) throw ModelError("duplicate vertex '" + id + "'");
    vertices.push_back({std::move(id), std::move(pos)});
    hold_cost.push_back({0.0});
    return static_cast<int>(vertices.size()) - 1;
}

int TemporalGraph::add_edge(int from, int to, double travel_time, int capacity, std::vector<double> cost) {
    edges.push_back({from, to, travel_time, capacity, std::move(cost)});
    return static_cast<int>(edges.size()) - 1;
}

int TemporalGraph::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id) return static_cast<int>(i);
    return -1;
}

double TemporalGraph::edge_cost(int e, int k) const { return cost_at(edges.at(e).cost, k); }

double TemporalGraph::hold_cost_at(int v, int k) const {
    return static_cast<std::size_t>(v) < hold_cost.size() ? cost_at(hold_cost[v], k) : 0.0;
}

void TemporalGraph::validate() const {
    const int n = static_cast<int>(vertices.size());
    for (const TgEdge& e : edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) throw ModelError("edge endpoint out of range");
        if (!(e.travel_time > 0.0)) throw ModelError("travel times must be positive");
        if (e.capacity < 1) throw ModelError("capacities must be at least 1");
        for (double c : e.cost)
            if (c < 0.0) throw ModelError("edge costs must be nonnegative");
    }
    for (const auto& h : hold_cost)
        for (double c : h)
            if (c < 0.0) throw ModelError("hold costs must be nonnegative");
    for (int s : sources)
        if (s < 0 || s >= n) throw ModelError("source out of range");
}

TemporalGraph TemporalGraph::from_json(const std::string& text) {
    TemporalGraph g;
    try {
        auto j = nlohmann::json::parse(text);
        for (const auto& v : j.at("vertices"))
            g.add_vertex(v.at("id").get<std::string>(), v.value("pos", std::vector<double>{}));
        auto vid = [&](const nlohmann::json& x) {
            int i = g.index_of(x.get<std::string>());
            if (i < 0) throw ModelError("unknown vertex '" + x.get<std::string>() + "'");
            return i;
        };
        for (const auto& e : j.value("edges", nlohmann::json::array()))
            g.add_edge(vid(e.at("from")), vid(e.at("to")), e.at("travel_time").get<double>(), e.value("capacity", 1),
                       e.contains("cost") ? read_cost(e["cost"]) : std::vector<double>{0.0});
        if (j.contains("hold_cost"))
            for (const auto& [id, c] : j["hold_cost"].items()) g.hold_cost[vid(nlohmann::json(id))] = read_cost(c);
        for (const auto& s : j.value("sources", nlohmann::json::array())) g.sources.push_back(vid(s));
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("temporal graph json: ") + e.what());
    }
    g.validate();
    return g;
}

TemporalGraph TemporalGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string TemporalGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const TgVertex& v : vertices) j["vertices"].push_back({{"id", v.id}, {"pos", v.pos}});
    j["edges"] = nlohmann::json::array();
    for (const TgEdge& e : edges)
        j["edges"].push_back({{"from", vertices[e.from].id},
                              {"to", vertices[e.to].id},
                              {"travel_time", e.travel_time},
                              {"capacity", e.capacity},
                              {"cost", e.cost}});
    j["hold_cost"] = nlohmann::json::object();
    for (std::size_t i = 0; i < vertices.size(); ++i) j["hold_cost"][vertices[i].id] = hold_cost[i];
    j["sources"] = nlohmann::json::array();
    for (int s : sources) j["sources"].push_back(vertices[s].id);
    return j.dump(2);
}

double auto_time_quantum(const TemporalGraph& g) {
    long long d = 0;
    for (const TgEdge& e : g.edges) d = std::gcd(d, std::llround(e.travel_time * 1e3));
    return d > 0 ? static_cast<double>(d) / 1e3 : 1.0;
}

int DnfNetwork::find_edge(int spatial, int k) const {
    if (spatial < 0 || spatial >= static_cast<int>(by_start.size()) || k < 0 || k >= static_cast<int>(by_start[spatial].size()))
        return -1;
    return by_start[spatial][k];
}

DnfNetwork expand_dnf(const TemporalGraph& g, int T, double dT) {
    if (g.vertices.empty()) throw ModelError("empty temporal graph");
    if (dT < 0.0 || std::isnan(dT)) throw ModelError("time quantum must be positive");
    if (T < 0) throw ModelError("horizon must be nonnegative");
    g.validate();
    if (dT == 0.0) dT = auto_time_quantum(g);

    DnfNetwork n;
    n.num_spatial = static_cast<int>(g.vertices.size());
    n.T = T;
    n.dT = dT;
    n.sources = g.sources;
    for (const TgEdge& e : g.edges) {
        double q = e.travel_time / dT;
        int s = static_cast<int>(std::ceil(q - 1e-9));
        n.steps.push_back(std::max(s, 1));
        n.rounded.push_back(std::fabs(n.steps.back() - q) > 1e-9);
    }
    const double hold_ub = std::max<double>(1.0, static_cast<double>(g.sources.size()));
    n.by_start.assign(g.edges.size(), std::vector<int>(T + 1, -1));
    for (int k = 0; k < T; ++k) {
        for (int p = 0; p < n.num_spatial; ++p)
            n.edges.push_back({n.vertex_id(p, k), n.vertex_id(p, k + 1), -1, p, k, g.hold_cost_at(p, k), hold_ub});
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const TgEdge& te = g.edges[e];
            if (k + n.steps[e] > T) continue;
            n.by_start[e][k] = static_cast<int>(n.edges.size());
            n.edges.push_back({n.vertex_id(te.from, k), n.vertex_id(te.to, k + n.steps[e]), static_cast<int>(e), te.from, k,
                               g.edge_cost(static_cast<int>(e), k), static_cast<double>(te.capacity)});
        }
    }
    n.in_adj.assign(n.num_vertices(), {});
    n.out_adj.assign(n.num_vertices(), {});
    for (std::size_t i = 0; i < n.edges.size(); ++i) {
        n.out_adj[n.edges[i].tail].push_back(static_cast<int>(i));
        n.in_adj[n.edges[i].head].push_back(static_cast<int>(i));
    }
    return n;
}

DnfEncoding encode_dnf(const DnfNetwork& n, Model& m, const std::map<std::string, std::set<int>>& regions, AtomVars& z,
                       const DnfOptions& opt) {
    DnfEncoding enc;
    for (std::size_t i = 0; i < n.edges.size(); ++i) {
        const DnfEdge& e = n.edges[i];
        std::string nm = opt.prefix + "_" + std::to_string(e.vertex) + "_" + (e.spatial < 0 ? "h" : std::to_string(e.spatial)) +
                         "_" + std::to_string(e.start);
        int v = opt.binary_flows ? m.add_binary(nm) : m.add_continuous(nm, 0.0, e.ub);
        if (opt.binary_flows) m.vars[v].ub = std::min(1.0, e.ub);
        enc.r.push_back(v);
        if (e.cost != 0.0) m.add_obj(v, e.cost);
    }
    std::vector<int> supply(n.num_spatial, 0);
    for (int s : n.sources) {
        if (s < 0 || s >= n.num_spatial) throw ModelError("source not in network");
        ++supply[s];
    }
    const std::string pre = opt.prefix + "_";
    for (int p = 0; p < n.num_spatial; ++p) {
        std::vector<Term> t;
        for (int e : n.out_edges(p, 0)) t.push_back({enc.r[e], 1.0});
        m.add_row(pre + "src_" + std::to_string(p), t, Sense::Eq, supply[p]);
        for (int k = 1; k < n.T; ++k) {
            std::vector<Term> c;
            for (int e : n.in_edges(p, k)) c.push_back({enc.r[e], 1.0});
            for (int e : n.out_edges(p, k)) c.push_back({enc.r[e], -1.0});
            m.add_row(pre + "flow_" + std::to_string(p) + "_" + std::to_string(k), c, Sense::Eq, 0.0);
        }
    }
    for (const auto& [key, zv] : z.all()) {
        auto it = regions.find(key.first);
        if (it == regions.end()) continue;
        const int k = key.second;
        if (k < 0 || k > n.T) throw ModelError("atom " + key.first + "@" + std::to_string(k) + " is outside the horizon");
        ++enc.linked_atoms;
        const std::string base = pre + key.first + "_" + std::to_string(k);
        if (k == 0) {
            bool in = false;
            for (int s : n.sources) in = in || it->second.count(s);
            m.vars[zv].lb = m.vars[zv].ub = in ? 1.0 : 0.0;
            continue;
        }
        std::vector<Term> any{{zv, 1.0}};
        int j = 0;
        for (int p : it->second) {
            if (p < 0 || p >= n.num_spatial) throw ModelError("region of " + key.first + " names an unknown vertex");
            for (int e : n.in_edges(p, k)) {
                any.push_back({enc.r[e], -1.0});
                m.add_row(base + "_lo" + std::to_string(++j), {{zv, 1.0}, {enc.r[e], -1.0}}, Sense::Ge, 0.0);
            }
        }
        m.add_row(base + "_up", any, Sense::Le, 0.0);
    }
    return enc;
}

int add_conflict_constraints(Model& m, const std::vector<RobotFlows>& robots, const std::vector<ConflictSet>& conflicts) {
    int rows = 0;
    auto robot = [&](int l) -> const RobotFlows& {
        if (l < 0 || l >= static_cast<int>(robots.size()) || !robots[l].net || !robots[l].enc)
            throw ModelError("unknown robot " + std::to_string(l));
        return robots[l];
    };
    int T = 0;
    for (const ConflictSet& c : conflicts) {
        for (auto [l, p] : c.vertices) {
            if (p < 0 || p >= robot(l).net->num_spatial) throw ModelError("unknown vertex in conflict set");
            T = std::max(T, robots[l].net->T);
        }
        for (auto [l, e] : c.edges) {
            if (e < 0 || e >= static_cast<int>(robot(l).net->by_start.size())) throw ModelError("unknown edge in conflict set");
            T = std::max(T, robots[l].net->T);
        }
    }
    for (std::size_t ci = 0; ci < conflicts.size(); ++ci) {
        const ConflictSet& c = conflicts[ci];
        for (int k = 0; k <= T; ++k) {
            std::vector<Term> t;
            for (auto [l, p] : c.vertices) {
                const DnfNetwork& n = *robots[l].net;
                if (k > n.T) continue;
                for (int e : n.in_edges(p, k)) t.push_back({robots[l].enc->r[e], 1.0});
            }
            for (auto [l, se] : c.edges) {
                int e = robots[l].net->find_edge(se, k);
                if (e >= 0) t.push_back({robots[l].enc->r[e], 1.0});
            }
            if (t.size() < 2) continue;
            for (const Term& x : t) {
                m.vars[x.var].kind = VarKind::Binary;
                m.vars[x.var].lb = 0.0;
                m.vars[x.var].ub = 1.0;
            }
            m.add_row("conflict" + std::to_string(ci + 1) + "_" + std::to_string(k), t, Sense::Le, 1.0);
            ++rows;
        }
    }
    return rows;
}

}  // namespace lnf
