#include "k3enr/dynkin.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace k3enr::dynkin {

void WeightedGraph::finalize() {
    const std::size_t n = mult.size();
    if (n > 64) throw GraphError("graph too large (max 64 vertices)");
    if (labels.size() != n || effective.size() != n)
        throw GraphError("graph: label/flag size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (mult[i].size() != n) throw GraphError("graph: multiplicity matrix not square");
        if (mult[i][i] != 0) throw GraphError("graph: nonzero diagonal multiplicity");
        for (std::size_t j = 0; j < n; ++j) {
            if (mult[i][j] < 0) throw GraphError("graph: negative multiplicity");
            if (mult[i][j] != mult[j][i]) throw GraphError("graph: multiplicity not symmetric");
        }
    }
    adj.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (mult[i][j] > 0) adj[i] |= uint64_t(1) << j;
}

IntMat WeightedGraph::gram() const {
    const int n = size();
    IntMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = i == j ? Int(-2) : Int(mult[i][j]);
    return g;
}

int WeightedGraph::max_multiplicity() const {
    int m = 0;
    for (const auto& row : mult)
        for (int x : row) m = std::max(m, x);
    return m;
}

WeightedGraph make_graph(std::vector<std::string> labels, std::vector<char> effective,
                         std::vector<std::vector<int>> mult) {
    WeightedGraph g;
    g.labels = std::move(labels);
    g.effective = std::move(effective);
    g.mult = std::move(mult);
    g.finalize();
    return g;
}

std::string AffineType::name() const {
    switch (family) {
        case AffineFamily::A: return "A~" + std::to_string(param);
        case AffineFamily::D: return "D~" + std::to_string(param);
        case AffineFamily::E: return "E~" + std::to_string(param);
    }
    return "?";
}

SpectralClass spectral_class(const WeightedGraph& g, const std::vector<int>& vs) {
    const int k = static_cast<int>(vs.size());
    IntMat sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sub.at(i, j) = i == j ? Int(-2) : Int(g.mult[vs[i]][vs[j]]);
    exactlat::Signature sig = exactlat::signature_of(sub);
    return SpectralClass{sig.positive == 0, sig.zero};
}

namespace {

bool connected_in(const WeightedGraph& g, const std::vector<int>& vs) {
    if (vs.empty()) return false;
    uint64_t inset = 0;
    for (int v : vs) inset |= uint64_t(1) << v;
    uint64_t seen = uint64_t(1) << vs[0];
    uint64_t frontier = seen;
    while (frontier) {
        uint64_t next = 0;
        while (frontier) {
            int v = std::countr_zero(frontier);
            frontier &= frontier - 1;
            next |= g.adj[v] & inset & ~seen;
        }
        seen |= next;
        frontier = next;
    }
    return seen == inset;
}

enum class ShapeClass { Elliptic, Affine, Dead };

struct ShapeResult {
    ShapeClass cls = ShapeClass::Dead;
    AffineType type{AffineFamily::A, 1};
};

// Classifies the induced subdiagram on vs, assuming it is connected and the
// graph has no m >= 3 edges. Elliptic = ADE (extensions may stay elliptic);
// Affine = parabolic (proper connected extensions are always indefinite);
// Dead = has a positive direction, as do all its supersets.
ShapeResult classify_shape(const WeightedGraph& g, const std::vector<int>& vs) {
    const int k = static_cast<int>(vs.size());
    if (k == 1) return {ShapeClass::Elliptic, {}};

    int edges = 0;
    int doubles = 0;
    std::array<int, 64> deg{};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            int m = g.mult[vs[i]][vs[j]];
            if (m == 0) continue;
            ++edges;
            if (m >= 2) ++doubles;
            ++deg[i];
            ++deg[j];
        }

    if (doubles > 0) {
        if (k == 2 && doubles == 1 && g.mult[vs[0]][vs[1]] == 2)
            return {ShapeClass::Affine, {AffineFamily::A, 1}};
        return {ShapeClass::Dead, {}};
    }
    if (edges >= k + 1) return {ShapeClass::Dead, {}};
    if (edges == k) {
        for (int i = 0; i < k; ++i)
            if (deg[i] != 2) return {ShapeClass::Dead, {}};
        return {ShapeClass::Affine, {AffineFamily::A, k - 1}};
    }

    // Tree.
    std::vector<int> branches;
    int leaves = 0;
    for (int i = 0; i < k; ++i) {
        if (deg[i] >= 3) branches.push_back(i);
        if (deg[i] == 1) ++leaves;
    }
    if (branches.empty()) return {ShapeClass::Elliptic, {}};  // path, type A
    if (branches.size() == 1) {
        int b = branches[0];
        if (deg[b] >= 5) return {ShapeClass::Dead, {}};
        if (deg[b] == 4)
            return k == 5 ? ShapeResult{ShapeClass::Affine, {AffineFamily::D, 4}}
                          : ShapeResult{ShapeClass::Dead, {}};
        // Three arms; walk each away from the branch.
        std::array<int, 3> arms{};
        int ai = 0;
        for (int j = 0; j < k; ++j) {
            if (j == b || g.mult[vs[b]][vs[j]] == 0) continue;
            int len = 1, prev = b, cur = j;
            while (deg[cur] == 2) {
                int nxt = -1;
                for (int t = 0; t < k; ++t)
                    if (t != prev && t != cur && g.mult[vs[cur]][vs[t]] > 0) nxt = t;
                prev = cur;
                cur = nxt;
                ++len;
            }
            arms[ai++] = len;
        }
        std::sort(arms.begin(), arms.end(), std::greater<int>());
        auto [a, bb, c] = std::tuple{arms[0], arms[1], arms[2]};
        if (c == 1 && bb == 1) return {ShapeClass::Elliptic, {}};  // D_k
        if (bb == 2 && c == 2) {
            if (a == 2) return {ShapeClass::Affine, {AffineFamily::E, 6}};
            return {ShapeClass::Dead, {}};  // properly contains E~6
        }
        if (bb == 2 && c == 1) {
            if (a <= 4) return {ShapeClass::Elliptic, {}};  // E6, E7, E8
            if (a == 5) return {ShapeClass::Affine, {AffineFamily::E, 8}};
            return {ShapeClass::Dead, {}};
        }
        if (bb == 3 && c == 1) {
            if (a == 3) return {ShapeClass::Affine, {AffineFamily::E, 7}};
            return {ShapeClass::Dead, {}};  // properly contains E~7
        }
        return {ShapeClass::Dead, {}};
    }
    if (branches.size() == 2) {
        int b1 = branches[0], b2 = branches[1];
        if (deg[b1] != 3 || deg[b2] != 3) return {ShapeClass::Dead, {}};
        if (leaves != 4) return {ShapeClass::Dead, {}};
        // Each leaf must hang directly off a branch vertex: the D~ shape.
        for (int i = 0; i < k; ++i) {
            if (deg[i] != 1) continue;
            if (g.mult[vs[i]][vs[b1]] == 0 && g.mult[vs[i]][vs[b2]] == 0)
                return {ShapeClass::Dead, {}};
        }
        return {ShapeClass::Affine, {AffineFamily::D, k - 1}};
    }
    return {ShapeClass::Dead, {}};
}

}  // namespace

std::optional<AffineType> structural_affine_type(const WeightedGraph& g,
                                                 const std::vector<int>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (g.mult[vs[i]][vs[j]] >= 3) return std::nullopt;
    ShapeResult r = classify_shape(g, vs);
    if (r.cls == ShapeClass::Affine) return r.type;
    return std::nullopt;
}

std::optional<AffineType> parabolic_type(const WeightedGraph& g, const std::vector<int>& vs) {
    if (!connected_in(g, vs)) throw GraphError("parabolic_type: vertex set is not connected");
    SpectralClass sc = spectral_class(g, vs);
    bool spectral_affine = sc.semidefinite && sc.corank == 1;
    std::optional<AffineType> structural = structural_affine_type(g, vs);
    if (spectral_affine != structural.has_value())
        throw GraphError("internal: spectral and structural affine recognizers disagree");
    return structural;
}

namespace {

ConnectedParabolic make_parabolic(const WeightedGraph& g, std::vector<int> vs, AffineType type) {
    ConnectedParabolic p;
    std::sort(vs.begin(), vs.end());
    p.type = type;
    p.vertices = std::move(vs);
    const int k = static_cast<int>(p.vertices.size());
    for (int v : p.vertices) {
        p.mask |= uint64_t(1) << v;
        p.closure |= (uint64_t(1) << v) | g.adj[v];
    }
    p.all_effective = true;
    p.any_noneffective = false;
    for (int v : p.vertices) {
        if (g.effective[v]) continue;
        p.all_effective = false;
        p.any_noneffective = true;
    }

    IntMat sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sub.at(i, j) = i == j ? Int(-2) : Int(g.mult[p.vertices[i]][p.vertices[j]]);
    IntMat ker = exactlat::integer_kernel(sub);
    if (ker.cols() != 1) throw GraphError("internal: parabolic kernel is not one-dimensional");
    p.kernel.resize(k);
    Int g0 = 0;
    for (int i = 0; i < k; ++i) {
        p.kernel[i] = ker.at(i, 0);
        g0 = gcd(g0, p.kernel[i]);
    }
    for (auto& x : p.kernel) x /= g0;
    bool neg = false, pos = false;
    for (const Int& x : p.kernel) {
        if (x < 0) neg = true;
        if (x > 0) pos = true;
        if (x == 0) throw GraphError("internal: parabolic kernel with zero mark");
    }
    if (neg && pos) throw GraphError("internal: parabolic kernel with mixed signs");
    if (neg)
        for (auto& x : p.kernel) x = -x;

    // Pairing vector of the kernel class with every vertex of the graph.
    const int n = g.size();
    p.ray.assign(n, 0);
    for (int i = 0; i < k; ++i) {
        int vi = p.vertices[i];
        for (int j = 0; j < n; ++j)
            p.ray[j] += p.kernel[i] * (vi == j ? Int(-2) : Int(g.mult[vi][j]));
    }
    Int rg = 0;
    for (const Int& x : p.ray) rg = gcd(rg, x);
    // rg == 0 means the kernel class vanishes in the span; only possible when
    // the ambient is degenerate. Kept as the zero ray.
    if (rg > 1)
        for (auto& x : p.ray) x /= rg;
    for (int j = 0; j < n; ++j) {
        if (p.ray[j] == 0) continue;
        if (p.ray[j] < 0)
            for (auto& x : p.ray) x = -x;
        break;
    }
    return p;
}

}  // namespace

std::vector<ConnectedParabolic> enumerate_parabolics(const WeightedGraph& g, int max_vertices) {
    if (g.max_multiplicity() >= 3)
        throw GraphError("unsupported graph: edge multiplicity >= 3 (Vinberg hypothesis fails)");
    std::vector<ConnectedParabolic> out;
    const int n = g.size();
    std::vector<int> stack_list;
    stack_list.reserve(max_vertices + 1);

    // Rooted connected-subset enumeration: each connected subset is produced
    // exactly once, grown from its minimal vertex. Affine subsets are recorded
    // and never extended; subsets with a positive direction prune their whole
    // branch (their supersets inherit the positive direction).
    auto rec = [&](auto&& self, uint64_t smask, uint64_t cand, uint64_t banned) -> void {
        uint64_t popped = 0;
        while (cand) {
            int v = std::countr_zero(cand);
            cand &= cand - 1;
            stack_list.push_back(v);
            uint64_t smask2 = smask | (uint64_t(1) << v);
            ShapeResult cls = classify_shape(g, stack_list);
            if (cls.cls == ShapeClass::Affine) {
                out.push_back(make_parabolic(g, stack_list, cls.type));
            } else if (cls.cls == ShapeClass::Elliptic &&
                       static_cast<int>(stack_list.size()) < max_vertices) {
                uint64_t sub_banned = banned | popped;
                uint64_t cand2 = (cand | (g.adj[v] & ~sub_banned)) & ~smask2;
                self(self, smask2, cand2, sub_banned);
            }
            stack_list.pop_back();
            popped |= uint64_t(1) << v;
        }
    };

    for (int r = 0; r < n; ++r) {
        uint64_t lowmask = (uint64_t(1) << r) | ((uint64_t(1) << r) - 1);
        stack_list.assign(1, r);
        rec(rec, uint64_t(1) << r, g.adj[r] & ~lowmask, lowmask & ~(uint64_t(1) << r));
        stack_list.clear();
    }
    return out;
}

MaximalDecompositions maximal_decompositions(const WeightedGraph& g, int max_vertices) {
    MaximalDecompositions result;
    result.parabolics = enumerate_parabolics(g, max_vertices);

    std::map<std::vector<Int>, std::vector<int>> groups;
    for (std::size_t i = 0; i < result.parabolics.size(); ++i)
        groups[result.parabolics[i].ray].push_back(static_cast<int>(i));

    std::vector<ParabolicDecomposition> candidates;
    for (const auto& [ray, members] : groups) {
        bool compatible = true;
        for (std::size_t a = 0; a < members.size() && compatible; ++a)
            for (std::size_t b = a + 1; b < members.size() && compatible; ++b)
                if (result.parabolics[members[a]].mask & result.parabolics[members[b]].closure)
                    compatible = false;
        if (compatible) {
            ParabolicDecomposition d;
            d.parts = members;
            d.ray = ray;
            for (int i : d.parts) d.total_rank += result.parabolics[i].type.rank();
            candidates.push_back(std::move(d));
        } else {
            // Same-ray parabolics that touch: fall back to exhaustive unions.
            std::vector<ParabolicDecomposition> best;
            std::vector<int> cur;
            auto rec = [&](auto&& self, std::size_t idx, uint64_t used_closure, int rank) -> void {
                if (idx == members.size()) {
                    if (cur.empty()) return;
                    if (best.empty() || rank > best.front().total_rank) best.clear();
                    if (best.empty() || rank == best.front().total_rank) {
                        ParabolicDecomposition d;
                        d.parts = cur;
                        d.total_rank = rank;
                        d.ray = ray;
                        best.push_back(std::move(d));
                    }
                    return;
                }
                const ConnectedParabolic& p = result.parabolics[members[idx]];
                if (!(p.mask & used_closure)) {
                    cur.push_back(members[idx]);
                    self(self, idx + 1, used_closure | p.closure, rank + p.type.rank());
                    cur.pop_back();
                }
                self(self, idx + 1, used_closure, rank);
            };
            rec(rec, 0, 0, 0);
            for (auto& d : best) candidates.push_back(std::move(d));
        }
    }

    for (const auto& d : candidates) result.max_rank = std::max(result.max_rank, d.total_rank);
    for (auto& d : candidates)
        if (d.total_rank == result.max_rank) result.decompositions.push_back(std::move(d));
    return result;
}

VinbergReport vinberg_check(const WeightedGraph& g, int n) {
    VinbergReport rep;
    rep.ambient_rank = n + 1;
    rep.triple_edge_free = g.max_multiplicity() <= 2;
    exactlat::Signature sig = exactlat::signature_of(g.gram());
    rep.span_signature = sig;
    rep.span_rank = sig.positive + sig.negative;
    rep.nondegenerate = (rep.span_rank == n + 1) && sig.positive == 1 && sig.negative == n;
    if (!rep.nondegenerate || !rep.triple_edge_free) {
        rep.verdict = false;
        return rep;
    }
    rep.decomp = maximal_decompositions(g, n + 1);
    for (const auto& p : rep.decomp.parabolics) {
        bool zero = true;
        for (const Int& x : p.ray)
            if (x != 0) zero = false;
        if (zero)
            throw GraphError("parabolic kernel class vanishes despite a non-degenerate span");
    }
    rep.completion.assign(rep.decomp.parabolics.size(), -1);
    for (std::size_t i = 0; i < rep.decomp.parabolics.size(); ++i) {
        for (std::size_t d = 0; d < rep.decomp.decompositions.size(); ++d) {
            const auto& dec = rep.decomp.decompositions[d];
            if (dec.total_rank != n - 1) continue;
            if (std::find(dec.parts.begin(), dec.parts.end(), static_cast<int>(i)) !=
                dec.parts.end()) {
                rep.completion[i] = static_cast<int>(d);
                break;
            }
        }
        if (rep.completion[i] < 0) rep.failing.push_back(static_cast<int>(i));
    }
    rep.verdict = rep.failing.empty();
    return rep;
}

namespace {

std::vector<int> refine_colors(const WeightedGraph& g, bool respect_flags,
                               const WeightedGraph* h = nullptr) {
    // Joint 1-WL refinement over one graph or the disjoint union of two.
    const int na = g.size();
    const int n = na + (h ? h->size() : 0);
    auto graph_of = [&](int v) -> const WeightedGraph& { return v < na ? g : *h; };
    auto local = [&](int v) { return v < na ? v : v - na; };
    auto base = [&](int v) { return v < na ? 0 : na; };

    std::vector<int> color(n, 0);
    if (respect_flags)
        for (int v = 0; v < n; ++v) color[v] = graph_of(v).effective[local(v)] ? 1 : 0;

    while (true) {
        std::vector<std::pair<std::vector<int>, int>> sigs(n);
        for (int v = 0; v < n; ++v) {
            const WeightedGraph& gr = graph_of(v);
            int lv = local(v);
            std::vector<std::pair<int, int>> nb;
            for (int u = 0; u < gr.size(); ++u)
                if (gr.mult[lv][u] > 0) nb.push_back({gr.mult[lv][u], color[base(v) + u]});
            std::sort(nb.begin(), nb.end());
            std::vector<int> s;
            s.push_back(color[v]);
            for (auto [m, c] : nb) {
                s.push_back(m);
                s.push_back(c);
            }
            sigs[v] = {std::move(s), v};
        }
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return sigs[a].first < sigs[b].first; });
        std::vector<int> next(n);
        int c = 0;
        for (int i = 0; i < n; ++i) {
            if (i > 0 && sigs[order[i]].first != sigs[order[i - 1]].first) ++c;
            next[order[i]] = c;
        }
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

// All color-respecting maps extending partial structure; used both for
// automorphisms (a == b) and isomorphisms.
template <typename Emit>
void search_maps(const WeightedGraph& a, const WeightedGraph& b, bool respect_flags, Emit&& emit) {
    const int n = a.size();
    if (n != b.size()) return;
    std::vector<int> color = refine_colors(a, respect_flags, &b);
    std::vector<int> ca(color.begin(), color.begin() + n);
    std::vector<int> cb(color.begin() + n, color.end());
    {
        std::vector<int> sa = ca, sb = cb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return;
    }

    std::vector<int> class_size(*std::max_element(color.begin(), color.end()) + 1, 0);
    for (int c : ca) class_size[c]++;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (class_size[ca[x]] != class_size[ca[y]]) return class_size[ca[x]] < class_size[ca[y]];
        if (ca[x] != ca[y]) return ca[x] < ca[y];
        return x < y;
    });

    std::vector<int> map(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            emit(map);
            return;
        }
        int v = order[depth];
        for (int u = 0; u < n; ++u) {
            if (used[u] || cb[u] != ca[v]) continue;
            if (respect_flags && a.effective[v] != b.effective[u]) continue;
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d) {
                int w = order[d];
                if (a.mult[v][w] != b.mult[u][map[w]]) ok = false;
            }
            if (!ok) continue;
            map[v] = u;
            used[u] = 1;
            self(self, depth + 1);
            used[u] = 0;
            map[v] = -1;
        }
    };
    rec(rec, 0);
}

std::vector<int> compose(const std::vector<int>& f, const std::vector<int>& g) {
    std::vector<int> h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = f[g[i]];
    return h;
}

}  // namespace

AutomorphismGroup automorphism_count(const WeightedGraph& g, bool respect_flags) {
    std::vector<std::vector<int>> all;
    search_maps(g, g, respect_flags, [&](const std::vector<int>& m) {
        all.push_back(m);
        if (all.size() > 5000000) throw GraphError("automorphism group too large to enumerate");
    });

    AutomorphismGroup out;
    out.order = all.size();

    std::vector<int> identity(g.size());
    std::iota(identity.begin(), identity.end(), 0);
    std::set<std::vector<int>> closure{identity};
    for (const auto& perm : all) {
        if (closure.count(perm)) continue;
        out.generators.push_back(perm);
        // Regenerate the closure with the new generator.
        std::vector<std::vector<int>> frontier(closure.begin(), closure.end());
        while (!frontier.empty()) {
            std::vector<std::vector<int>> next;
            for (const auto& x : frontier)
                for (const auto& gen : out.generators) {
                    auto y = compose(gen, x);
                    if (closure.insert(y).second) next.push_back(std::move(y));
                }
            frontier = std::move(next);
        }
    }
    if (closure.size() != out.order)
        throw GraphError("internal: generator closure does not match automorphism count");
    return out;
}

std::optional<std::vector<int>> find_isomorphism(const WeightedGraph& a, const WeightedGraph& b,
                                                 bool respect_flags) {
    std::optional<std::vector<int>> found;
    struct Stop {};
    try {
        search_maps(a, b, respect_flags, [&](const std::vector<int>& m) {
            found = m;
            throw Stop{};
        });
    } catch (const Stop&) {
    }
    return found;
}

std::string graph_to_json(const WeightedGraph& g) {
    nlohmann::json j;
    nlohmann::json verts = nlohmann::json::array();
    for (int i = 0; i < g.size(); ++i)
        verts.push_back({{"label", g.labels[i]}, {"effective", static_cast<bool>(g.effective[i])}});
    j["vertices"] = verts;
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < g.size(); ++i)
        for (int jx = i + 1; jx < g.size(); ++jx)
            if (g.mult[i][jx] > 0) edges.push_back({i, jx, g.mult[i][jx]});
    j["edges"] = edges;
    return j.dump(2);
}

WeightedGraph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    WeightedGraph g;
    for (const auto& v : j.at("vertices")) {
        g.labels.push_back(v.at("label").get<std::string>());
        g.effective.push_back(v.value("effective", true) ? 1 : 0);
    }
    g.mult.assign(g.labels.size(), std::vector<int>(g.labels.size(), 0));
    for (const auto& e : j.at("edges")) {
        int a = e[0].get<int>(), b = e[1].get<int>(), m = e[2].get<int>();
        g.mult[a][b] = m;
        g.mult[b][a] = m;
    }
    g.finalize();
    return g;
}

std::string graph_to_dot(const WeightedGraph& g) {
    std::ostringstream os;
    os << "graph dual {\n  node [shape=circle];\n";
    for (int i = 0; i < g.size(); ++i) {
        os << "  v" << i << " [label=\"" << g.labels[i] << "\"";
        if (!g.effective[i]) os << " style=dashed";
        os << "];\n";
    }
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
            for (int m = 0; m < g.mult[i][j]; ++m) os << "  v" << i << " -- v" << j << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace k3enr::dynkin
