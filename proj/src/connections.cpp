#include "fluxforge/connections.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

namespace fluxforge {

namespace {

constexpr double kBoundaryTol = 1e-12;

bool on_boundary(const Point& x, int dim) {
    return dist_to_boundary(x, dim) <= kBoundaryTol;
}

Point nearest_boundary_point(const Point& x, int dim) {
    int axis = 0;
    double best = -1.0;
    for (int a = 0; a < dim; ++a) {
        if (std::abs(x[a]) > best) {
            best = std::abs(x[a]);
            axis = a;
        }
    }
    Point y = x;
    y[axis] = x[axis] >= 0.0 ? 0.5 : -0.5;
    return y;
}

// Minimum-cost flow by successive shortest augmenting paths (SPFA). Graphs
// here are tiny: charges, one boundary node, super source/sink.
struct McmfGraph {
    struct Arc {
        int to;
        long cap;
        double cost;
        int rev;
    };
    std::vector<std::vector<Arc>> adj;

    explicit McmfGraph(int n) : adj(n) {}

    void add(int u, int v, long cap, double cost) {
        adj[u].push_back({v, cap, cost, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0, -cost, static_cast<int>(adj[u].size()) - 1});
    }

    double run(int s, int t) {
        const int n = static_cast<int>(adj.size());
        double total = 0.0;
        while (true) {
            std::vector<double> dist(n, std::numeric_limits<double>::infinity());
            std::vector<int> pv(n, -1), pe(n, -1);
            std::vector<bool> inq(n, false);
            dist[s] = 0.0;
            std::deque<int> q{s};
            inq[s] = true;
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                inq[u] = false;
                for (int i = 0; i < static_cast<int>(adj[u].size()); ++i) {
                    const Arc& a = adj[u][i];
                    if (a.cap <= 0) continue;
                    double nd = dist[u] + a.cost;
                    if (nd < dist[a.to] - 1e-15) {
                        dist[a.to] = nd;
                        pv[a.to] = u;
                        pe[a.to] = i;
                        if (!inq[a.to]) {
                            q.push_back(a.to);
                            inq[a.to] = true;
                        }
                    }
                }
            }
            if (pv[t] < 0) break;
            long push = std::numeric_limits<long>::max();
            for (int v = t; v != s; v = pv[v]) push = std::min(push, adj[pv[v]][pe[v]].cap);
            for (int v = t; v != s; v = pv[v]) {
                Arc& a = adj[pv[v]][pe[v]];
                a.cap -= push;
                adj[v][a.rev].cap += push;
            }
            total += push * dist[t];
        }
        return total;
    }

    // Valid potentials from the final residual graph: Bellman-Ford distances
    // from a virtual all-zero source, so reduced costs are nonnegative.
    std::vector<double> residual_potentials() const {
        const int n = static_cast<int>(adj.size());
        std::vector<double> dist(n, 0.0);
        for (int pass = 0; pass < n + 1; ++pass) {
            bool changed = false;
            for (int u = 0; u < n; ++u) {
                for (const Arc& a : adj[u]) {
                    if (a.cap <= 0) continue;
                    double nd = dist[u] + a.cost;
                    if (nd < dist[a.to] - 1e-15) {
                        dist[a.to] = nd;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        return dist;
    }
};

}  // namespace

ChargeSet boundary_of_current(const OneCurrent& current) {
    const int n = current.dim;
    std::map<std::array<double, kMaxDim>, long> acc;
    for (const auto& s : current.segments) {
        if (!on_boundary(s.b, n)) acc[s.b] += s.mult;
        if (!on_boundary(s.a, n)) acc[s.a] -= s.mult;
    }
    ChargeSet out;
    for (const auto& [pos, deg] : acc) {
        if (deg == 0) continue;
        out.items.push_back({pos, deg});
    }
    return out;
}

OneCurrent greedy_connection(const ChargeSet& charges, int dim,
                             std::optional<Point> boundary_point) {
    charges.validate(dim);
    OneCurrent out;
    out.dim = dim;

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < charges.items.size(); ++i)
        (charges.items[i].deg > 0 ? pos : neg).push_back(i);

    std::vector<long> rem(neg.size());
    for (std::size_t k = 0; k < neg.size(); ++k) rem[k] = -charges.items[neg[k]].deg;

    std::size_t k = 0;
    std::vector<std::pair<std::size_t, long>> leftover_pos;
    for (std::size_t pi : pos) {
        long s = charges.items[pi].deg;
        while (s > 0 && k < neg.size()) {
            long take = std::min(s, rem[k]);
            if (take > 0) {
                out.segments.push_back({charges.items[neg[k]].pos, charges.items[pi].pos, take});
                s -= take;
                rem[k] -= take;
            }
            if (rem[k] == 0) ++k;
        }
        if (s > 0) leftover_pos.emplace_back(pi, s);
    }

    bool needs_boundary = !leftover_pos.empty() || k < neg.size();
    if (needs_boundary) {
        if (!boundary_point)
            throw std::invalid_argument("nonzero total degree requires a boundary point");
        if (dist_to_boundary(*boundary_point, dim) > kBoundaryTol)
            throw std::invalid_argument("boundary point must lie on the domain boundary");
        for (const auto& [pi, s] : leftover_pos)
            out.segments.push_back({*boundary_point, charges.items[pi].pos, s});
        for (; k < neg.size(); ++k)
            if (rem[k] > 0)
                out.segments.push_back({charges.items[neg[k]].pos, *boundary_point, rem[k]});
    }
    return out;
}

MinimalConnection minimal_connection(const ChargeSet& charges, int dim) {
    charges.validate(dim);
    MinimalConnection result;
    result.current.dim = dim;
    result.potentials.assign(charges.size(), 0.0);
    if (charges.empty()) return result;

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < charges.items.size(); ++i)
        (charges.items[i].deg > 0 ? pos : neg).push_back(i);

    const int P = static_cast<int>(pos.size());
    const int Q = static_cast<int>(neg.size());
    const int S = 0, B = 1 + P + Q, T = B + 1;
    auto pos_node = [&](int i) { return 1 + i; };
    auto neg_node = [&](int j) { return 1 + P + j; };

    long sum_pos = 0, sum_neg = 0;
    for (int i = 0; i < P; ++i) sum_pos += charges.items[pos[i]].deg;
    for (int j = 0; j < Q; ++j) sum_neg += -charges.items[neg[j]].deg;

    McmfGraph g(T + 1);
    const long INF = std::numeric_limits<long>::max() / 4;
    for (int j = 0; j < Q; ++j)
        g.add(S, neg_node(j), -charges.items[neg[j]].deg, 0.0);
    if (sum_pos > 0) g.add(S, B, sum_pos, 0.0);
    for (int j = 0; j < Q; ++j) {
        const Point& xj = charges.items[neg[j]].pos;
        for (int i = 0; i < P; ++i)
            g.add(neg_node(j), pos_node(i), INF,
                  euclid_dist(xj, charges.items[pos[i]].pos, dim));
        g.add(neg_node(j), B, INF, dist_to_boundary(xj, dim));
    }
    for (int i = 0; i < P; ++i) {
        const Point& xi = charges.items[pos[i]].pos;
        g.add(B, pos_node(i), INF, dist_to_boundary(xi, dim));
        g.add(pos_node(i), T, charges.items[pos[i]].deg, 0.0);
    }
    if (sum_neg > 0) g.add(B, T, sum_neg, 0.0);

    result.mass = g.run(S, T);

    // Segments from the forward-arc flows (flow = residual cap of the
    // reverse arc). Arc insertion order makes this deterministic.
    for (int j = 0; j < Q; ++j) {
        const Point& xj = charges.items[neg[j]].pos;
        for (const auto& arc : g.adj[neg_node(j)]) {
            if (arc.cost < 0.0) continue;  // reverse arc
            long flow = g.adj[arc.to][arc.rev].cap;
            if (flow <= 0) continue;
            if (arc.to == B)
                result.current.segments.push_back({xj, nearest_boundary_point(xj, dim), flow});
            else if (arc.to >= pos_node(0) && arc.to < pos_node(P))
                result.current.segments.push_back(
                    {xj, charges.items[pos[arc.to - 1]].pos, flow});
        }
    }
    for (const auto& arc : g.adj[B]) {
        if (arc.cost < 0.0 || arc.to == T || arc.to == S) continue;
        long flow = g.adj[arc.to][arc.rev].cap;
        if (flow <= 0) continue;
        if (arc.to >= pos_node(0) && arc.to < pos_node(P)) {
            const Point& xi = charges.items[pos[arc.to - 1]].pos;
            result.current.segments.push_back({nearest_boundary_point(xi, dim), xi, flow});
        }
    }

    std::vector<double> pot = g.residual_potentials();
    for (int i = 0; i < P; ++i) result.potentials[pos[i]] = pot[pos_node(i)] - pot[B];
    for (int j = 0; j < Q; ++j) result.potentials[neg[j]] = pot[neg_node(j)] - pot[B];
    return result;
}

DualCertificate dual_value(const ChargeSet& charges, int dim, int grid_res) {
    if (grid_res < 8) throw std::invalid_argument("grid_res must be >= 8");
    MinimalConnection mc = minimal_connection(charges, dim);

    // Clamp negative-charge potentials into their feasible range, then extend
    // with the inf-convolution formula: 1-Lipschitz, zero on the boundary.
    std::vector<std::pair<Point, double>> neg_pots;
    for (std::size_t i = 0; i < charges.items.size(); ++i) {
        if (charges.items[i].deg >= 0) continue;
        double lo = -dist_to_boundary(charges.items[i].pos, dim);
        neg_pots.emplace_back(charges.items[i].pos, std::max(mc.potentials[i], lo));
    }
    auto phi = [&](const Point& x) {
        double v = dist_to_boundary(x, dim);
        for (const auto& [y, p] : neg_pots)
            v = std::min(v, p + euclid_dist(x, y, dim));
        return v;
    };

    DualCertificate cert;
    cert.grid_res = grid_res;
    long cells = 1;
    for (int a = 0; a < dim; ++a) cells *= grid_res;
    cert.phi.resize(cells);
    const double h = 1.0 / grid_res;
    for (long flat = 0; flat < cells; ++flat) {
        Point x{};
        long r = flat;
        for (int a = dim - 1; a >= 0; --a) {
            long i = r % grid_res;
            r /= grid_res;
            x[a] = -0.5 + (i + 0.5) * h;
        }
        cert.phi[flat] = phi(x);
    }

    double resid = 0.0;
    for (long flat = 0; flat < cells; ++flat) {
        long stride = 1;
        for (int a = dim - 1; a >= 0; --a) {
            long i = (flat / stride) % grid_res;
            if (i + 1 < grid_res) {
                double slope = std::abs(cert.phi[flat + stride] - cert.phi[flat]) / h;
                resid = std::max(resid, slope - 1.0);
            }
            stride *= grid_res;
        }
    }
    cert.feasibility_residual = std::max(0.0, resid);

    for (const auto& c : charges.items) cert.value += c.deg * phi(c.pos);
    return cert;
}

std::vector<std::pair<Point, Point>> dipole_decomposition(const OneCurrent& current) {
    ChargeSet s = boundary_of_current(current);
    MinimalConnection mc = minimal_connection(s, current.dim);
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& seg : mc.current.segments)
        for (long k = 0; k < seg.mult; ++k) pairs.emplace_back(seg.b, seg.a);
    return pairs;
}

}  // namespace fluxforge
