#pragma once

// Pointed dags: directed acyclic graphs with a unique sink in which every
// vertex has in-degree 0 or 2, plus the subgraph operations used by the
// pebbling refutation engine.

#include <array>
#include <istream>
#include <optional>
#include <queue>
#include <sstream>

#include "poolres/core.hpp"

namespace poolres {

class PointedDag {
  public:
    // Edges are (u, w): u is an immediate predecessor of w. Vertices that
    // cannot reach the sink are rejected rather than pruned.
    static PointedDag from_edges(int n, std::vector<std::pair<int, int>> edges, int sink) {
        PointedDag g;
        g.n_ = n;
        g.sink_ = sink;
        g.preds_.assign(n, {});
        g.succs_.assign(n, {});
        if (sink < 0 || sink >= n) throw domain_error("sink out of range");
        for (auto [u, w] : edges) {
            if (u < 0 || u >= n || w < 0 || w >= n) throw domain_error("edge out of range");
            g.preds_[w].push_back(u);
            g.succs_[u].push_back(w);
        }
        for (int v = 0; v < n; ++v) {
            std::sort(g.preds_[v].begin(), g.preds_[v].end());
            std::sort(g.succs_[v].begin(), g.succs_[v].end());
            if (g.preds_[v].size() != 0 && g.preds_[v].size() != 2)
                throw domain_error("vertex " + std::to_string(v) + " has in-degree " +
                                   std::to_string(g.preds_[v].size()));
            if (v != sink && g.succs_[v].empty())
                throw domain_error("vertex " + std::to_string(v) + " is a second sink");
        }
        if (!g.succs_[sink].empty()) throw domain_error("sink has outgoing edges");
        if (g.topo_order().size() != (size_t)n) throw domain_error("graph has a cycle");
        for (int v = 0; v < n; ++v)
            if (!g.reaches_sink(v))
                throw domain_error("vertex " + std::to_string(v) + " cannot reach the sink");
        return g;
    }

    int n() const { return n_; }
    int sink() const { return sink_; }
    bool is_source(int v) const { return preds_[v].empty(); }
    const std::vector<int>& preds(int v) const { return preds_[v]; }
    const std::vector<int>& succs(int v) const { return succs_[v]; }

    std::vector<int> sources() const {
        std::vector<int> out;
        for (int v = 0; v < n_; ++v)
            if (is_source(v)) out.push_back(v);
        return out;
    }

    std::vector<int> vertices() const {
        std::vector<int> out(n_);
        for (int v = 0; v < n_; ++v) out[v] = v;
        return out;
    }

    size_t edge_count() const {
        size_t e = 0;
        for (int v = 0; v < n_; ++v) e += preds_[v].size();
        return e;
    }

    // Predecessor-before-successor order.
    std::vector<int> topo_order() const {
        std::vector<int> indeg(n_), order;
        for (int v = 0; v < n_; ++v) indeg[v] = (int)preds_[v].size();
        std::priority_queue<int, std::vector<int>, std::greater<int>> q;
        for (int v = 0; v < n_; ++v)
            if (indeg[v] == 0) q.push(v);
        while (!q.empty()) {
            int v = q.top();
            q.pop();
            order.push_back(v);
            for (int w : succs_[v])
                if (--indeg[w] == 0) q.push(w);
        }
        return order;
    }

    bool reaches_sink(int v) const { return reaches(v, sink_, {}); }

    // Is there a directed path from u to w avoiding every vertex in `avoid`
    // as an intermediate or endpoint other than u, w themselves?
    bool reaches(int u, int w, const std::vector<int>& avoid) const {
        auto blocked = [&](int v) {
            return std::find(avoid.begin(), avoid.end(), v) != avoid.end();
        };
        if (blocked(u) || blocked(w)) return false;
        std::vector<bool> seen(n_, false);
        std::queue<int> q;
        q.push(u);
        seen[u] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v == w) return true;
            for (int s : succs_[v])
                if (!seen[s] && !blocked(s)) {
                    seen[s] = true;
                    q.push(s);
                }
        }
        return false;
    }

  private:
    int n_ = 0;
    int sink_ = 0;
    std::vector<std::vector<int>> preds_, succs_;
};

// An induced subgraph keeping original vertex ids.
struct SubDag {
    const PointedDag* base = nullptr;
    std::vector<bool> in;        // vertex membership
    std::vector<bool> cut;       // vertices whose in-edges were removed
    int sink = 0;

    bool contains(int v) const { return in[v]; }
    bool source_here(int v) const { return cut[v] || base->is_source(v); }
    std::array<int, 2> preds_here(int v) const {
        const auto& p = base->preds(v);
        return {p[0], p[1]};
    }
    std::vector<int> members() const {
        std::vector<int> out;
        for (int v = 0; v < (int)in.size(); ++v)
            if (in[v]) out.push_back(v);
        return out;
    }
    size_t size() const { return members().size(); }
};

// G restricted to w: the induced subgraph of vertices from which w is
// reachable, with sink w.
inline SubDag restrict_to(const PointedDag& g, int w) {
    SubDag s;
    s.base = &g;
    s.in.assign(g.n(), false);
    s.cut.assign(g.n(), false);
    s.sink = w;
    // reverse reachability from w
    std::queue<int> q;
    q.push(w);
    s.in[w] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int p : g.preds(v))
            if (!s.in[p]) {
                s.in[p] = true;
                q.push(p);
            }
    }
    return s;
}

// Make each vertex of `cut_set` a leaf of the subgraph by dropping its
// incoming edges, then drop the vertices that no longer reach the sink.
inline SubDag cut_vertices(const SubDag& s, const std::vector<int>& cut_set) {
    SubDag out = s;
    for (int v : cut_set) {
        if (v < 0 || v >= (int)out.in.size() || !out.in[v])
            throw domain_error("cut vertex not in subgraph");
        out.cut[v] = true;
    }
    // keep vertices that reach the sink without passing through a cut
    // vertex's in-edges; compute reverse reachability honoring cuts
    std::vector<bool> keep(out.in.size(), false);
    std::queue<int> q;
    q.push(out.sink);
    keep[out.sink] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (out.cut[v]) continue;  // in-edges removed
        for (int p : s.base->preds(v))
            if (out.in[p] && !keep[p]) {
                keep[p] = true;
                q.push(p);
            }
    }
    out.in = keep;
    return out;
}

inline SubDag cut_vertex(const PointedDag& g, int w) {
    SubDag whole = restrict_to(g, g.sink());
    return cut_vertices(whole, {w});
}

// u and v are independent ancestors of w when each can reach w by a path
// avoiding the other.
inline bool independent_ancestors(const PointedDag& g, int u, int v, int w) {
    if (u == v || u == w || v == w) return false;
    return g.reaches(u, w, {v}) && g.reaches(v, w, {u});
}

// The shortest backward path from `from` to `target` following predecessor
// edges, avoiding the given vertices, smallest-vertex tie-breaking. Empty if
// none exists.
inline std::vector<int> backward_path(const PointedDag& g, int from, int target,
                                      const std::vector<int>& avoid) {
    auto blocked = [&](int v) {
        return std::find(avoid.begin(), avoid.end(), v) != avoid.end();
    };
    if (blocked(from) || blocked(target)) return {};
    // dist[x] = steps from x to target walking predecessor edges
    std::vector<int> dist(g.n(), -1);
    std::queue<int> q;
    dist[target] = 0;
    q.push(target);
    while (!q.empty()) {
        int y = q.front();
        q.pop();
        for (int x : g.succs(y))
            if (!blocked(x) && dist[x] < 0) {
                dist[x] = dist[y] + 1;
                q.push(x);
            }
    }
    if (dist[from] < 0) return {};
    std::vector<int> path{from};
    int cur = from;
    while (cur != target) {
        int next = -1;
        for (int p : g.preds(cur))
            if (!blocked(p) && dist[p] == dist[cur] - 1 && (next < 0 || p < next)) next = p;
        assert(next >= 0);
        path.push_back(next);
        cur = next;
    }
    return path;
}

struct DivergenceResult {
    int f = -1;
    std::array<int, 2> matched{};  // the two targets whose paths contain f
};

// Walk the three backward paths from w to the targets (each avoiding the
// other two); at the point where they first diverge the in-degree bound
// forces exactly two of them to continue together, and f is the last vertex
// those two share.
inline DivergenceResult divergence_vertex(const PointedDag& g, int w,
                                          const std::array<int, 3>& targets) {
    std::array<std::vector<int>, 3> paths;
    for (int t = 0; t < 3; ++t) {
        std::vector<int> avoid;
        for (int o = 0; o < 3; ++o)
            if (o != t) avoid.push_back(targets[o]);
        paths[t] = backward_path(g, w, targets[t], avoid);
        if (paths[t].empty())
            throw domain_error("no target-avoiding path from the sink to vertex " +
                               std::to_string(targets[t]));
    }
    size_t c = 0;
    while (c + 1 < paths[0].size() && c + 1 < paths[1].size() && c + 1 < paths[2].size() &&
           paths[0][c + 1] == paths[1][c + 1] && paths[1][c + 1] == paths[2][c + 1])
        ++c;
    // the two paths that still agree one step further
    int a = -1, b = -1;
    for (int i = 0; i < 3 && a < 0; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if (c + 1 < paths[i].size() && c + 1 < paths[j].size() &&
                paths[i][c + 1] == paths[j][c + 1]) {
                a = i;
                b = j;
                break;
            }
        }
    if (a < 0) throw domain_error("three backward paths diverge three ways at once");
    size_t cc = c + 1;
    while (cc + 1 < paths[a].size() && cc + 1 < paths[b].size() &&
           paths[a][cc + 1] == paths[b][cc + 1])
        ++cc;
    return {paths[a][cc], {targets[a], targets[b]}};
}

// Pyramid graph of the given height: row r (from the top, r = 0 at the apex)
// has r+1 vertices; each non-bottom vertex has the two vertices below it as
// predecessors. The apex is the sink.
inline PointedDag pyramid(int height) {
    if (height < 0) throw domain_error("pyramid height must be >= 0");
    int rows = height + 1;
    auto id = [&](int row, int pos) {  // row 0 = bottom
        int below = 0;
        for (int r = 0; r < row; ++r) below += rows - r;
        return below + pos;
    };
    int n = rows * (rows + 1) / 2;
    std::vector<std::pair<int, int>> edges;
    for (int row = 1; row < rows; ++row)
        for (int pos = 0; pos < rows - row; ++pos) {
            edges.push_back({id(row - 1, pos), id(row, pos)});
            edges.push_back({id(row - 1, pos + 1), id(row, pos)});
        }
    return PointedDag::from_edges(n, std::move(edges), id(rows - 1, 0));
}

// Text edge list: "n m sink" header, then m lines "u v".
inline PointedDag parse_pointed_dag(std::istream& in) {
    int n, m, sink;
    if (!(in >> n >> m >> sink)) throw domain_error("bad graph header");
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < m; ++e) {
        int u, v;
        if (!(in >> u >> v)) throw domain_error("truncated edge list");
        edges.push_back({u, v});
    }
    return PointedDag::from_edges(n, std::move(edges), sink);
}

inline PointedDag parse_pointed_dag(const std::string& text) {
    std::istringstream is(text);
    return parse_pointed_dag(is);
}

}  // namespace poolres
