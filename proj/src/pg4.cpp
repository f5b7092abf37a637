#include "k3enr/pg4.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>

namespace k3enr::pg4 {

namespace {
constexpr uint8_t kMul[4][4] = {
    {0, 0, 0, 0},
    {0, 1, 2, 3},
    {0, 2, 3, 1},
    {0, 3, 1, 2},
};
constexpr uint8_t kInv[4] = {0, 1, 3, 2};
}  // namespace

uint8_t f4_mul(uint8_t a, uint8_t b) { return kMul[a][b]; }

uint8_t f4_inv(uint8_t a) {
    if (a == 0) throw PlaneError("f4_inv(0)");
    return kInv[a];
}

Plane build_plane() {
    Plane pl{};
    // Normalized triples in lexicographic order; same list serves points and
    // lines (the incidence pairing is the standard dot product).
    int idx = 0;
    for (int a = 0; a < 4 && idx < 21; ++a)
        for (int b = 0; b < 4 && idx < 21; ++b)
            for (int c = 0; c < 4 && idx < 21; ++c) {
                HomTriple t{static_cast<uint8_t>(a), static_cast<uint8_t>(b),
                            static_cast<uint8_t>(c)};
                uint8_t first = t[0] ? t[0] : (t[1] ? t[1] : t[2]);
                if (first != 1) continue;
                pl.points[idx] = t;
                pl.lines[idx] = t;
                ++idx;
            }
    if (idx != 21) throw PlaneError("expected 21 normalized triples");

    for (int l = 0; l < 21; ++l) {
        uint32_t mask = 0;
        for (int p = 0; p < 21; ++p) {
            uint8_t dot = 0;
            for (int k = 0; k < 3; ++k) dot = f4_add(dot, f4_mul(pl.points[p][k], pl.lines[l][k]));
            if (dot == 0) mask |= 1u << p;
        }
        pl.line_points[l] = mask;
    }
    for (int p = 0; p < 21; ++p) {
        uint32_t mask = 0;
        for (int l = 0; l < 21; ++l)
            if (pl.incident(p, l)) mask |= 1u << l;
        pl.point_lines[p] = mask;
    }
    for (auto& row : pl.through_) row.fill(-1);
    for (auto& row : pl.meet_) row.fill(-1);
    for (int p = 0; p < 21; ++p)
        for (int q = 0; q < 21; ++q) {
            if (p == q) continue;
            uint32_t common = pl.point_lines[p] & pl.point_lines[q];
            if (std::popcount(common) != 1) throw PlaneError("two points not on a unique line");
            pl.through_[p][q] = static_cast<int8_t>(std::countr_zero(common));
        }
    for (int l = 0; l < 21; ++l)
        for (int m = 0; m < 21; ++m) {
            if (l == m) continue;
            uint32_t common = pl.line_points[l] & pl.line_points[m];
            if (std::popcount(common) != 1) throw PlaneError("two lines not meeting at one point");
            pl.meet_[l][m] = static_cast<int8_t>(std::countr_zero(common));
        }
    return pl;
}

std::vector<Hyperoval> hyperovals(const Plane& plane) {
    std::vector<Hyperoval> out;
    Hyperoval cur{};
    auto extends = [&](int depth, int q) {
        for (int i = 0; i < depth; ++i)
            for (int j = i + 1; j < depth; ++j)
                if (plane.incident(q, plane.line_through(cur[i], cur[j]))) return false;
        return true;
    };
    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == 6) {
            out.push_back(cur);
            return;
        }
        for (int q = start; q < 21; ++q) {
            if (21 - q < 6 - depth) break;
            if (!extends(depth, q)) continue;
            cur[depth] = q;
            self(self, depth + 1, q + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

MIIFlag make_mii_flag(const Plane& plane, int ell, int p1, int p2) {
    MIIFlag f;
    f.ell = ell;
    if (ell < 0 || ell >= 21) throw PlaneError("flag: bad line index");
    std::vector<int> pts;
    for (int p = 0; p < 21; ++p)
        if (plane.incident(p, ell)) pts.push_back(p);
    if (pts.size() != 5) throw PlaneError("flag: line without five points");
    if (!plane.incident(p1, ell) || !plane.incident(p2, ell) || p1 == p2)
        throw PlaneError("flag: p1, p2 must be distinct points of ell");
    f.p[0] = p1;
    f.p[1] = p2;
    int k = 2;
    for (int q : pts)
        if (q != p1 && q != p2) f.p[k++] = q;
    for (int i = 0; i < 2; ++i) {
        int j = 0;
        for (int l = 0; l < 21; ++l) {
            if (l == ell || !plane.incident(f.p[i], l)) continue;
            if (j >= 4) throw PlaneError("flag: more than four residual lines");
            f.l[i][j++] = l;
        }
        if (j != 4) throw PlaneError("flag: expected four residual lines");
    }
    return f;
}

MIIFlag default_mii_flag(const Plane& plane) {
    std::vector<int> pts;
    for (int p = 0; p < 21; ++p)
        if (plane.incident(p, 0)) pts.push_back(p);
    return make_mii_flag(plane, 0, pts[0], pts[1]);
}

void validate_flag(const Plane& plane, const MIIFlag& flag) {
    if (flag.ell < 0 || flag.ell >= 21) throw PlaneError("invalid flag: line out of range");
    for (int i = 0; i < 5; ++i) {
        if (flag.p[i] < 0 || flag.p[i] >= 21 || !plane.incident(flag.p[i], flag.ell))
            throw PlaneError("invalid flag: p" + std::to_string(i + 1) + " not on ell");
        for (int j = i + 1; j < 5; ++j)
            if (flag.p[i] == flag.p[j]) throw PlaneError("invalid flag: repeated point");
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) {
            int l = flag.l[i][j];
            if (l == flag.ell || !plane.incident(flag.p[i], l))
                throw PlaneError("invalid flag: l_ij not a residual line through p_i");
            for (int k = 0; k < 5; ++k)
                if (k != i && plane.incident(flag.p[k], l))
                    throw PlaneError("invalid flag: l_ij passes another p_k");
        }
}

std::vector<Hyperoval> mii_special_hyperovals(const Plane& plane, const MIIFlag& flag) {
    validate_flag(plane, flag);
    std::vector<Hyperoval> out;
    for (const Hyperoval& h : hyperovals(plane)) {
        uint32_t mask = 0;
        for (int q : h) mask |= 1u << q;
        if (!((mask >> flag.p[0]) & 1u) || !((mask >> flag.p[1]) & 1u)) continue;
        if ((mask >> flag.p[2]) & 1u) continue;
        if ((mask >> flag.p[3]) & 1u) continue;
        if ((mask >> flag.p[4]) & 1u) continue;
        uint32_t rest = mask & ~((1u << flag.p[0]) | (1u << flag.p[1]));
        bool good = true;
        for (int i = 0; i < 2 && good; ++i)
            for (int j = 0; j < 4 && good; ++j)
                if (std::popcount(plane.line_points[flag.l[i][j]] & rest) != 1) good = false;
        if (good) out.push_back(h);
    }
    return out;
}

std::vector<MIBaseConfig> mi_base_configurations(const Plane& plane) {
    std::vector<MIBaseConfig> out;
    std::array<int, 9> cur{};
    std::array<int, 21> line_count{};

    auto finish = [&]() {
        for (int l = 0; l < 21; ++l)
            if (line_count[l] != 1 && line_count[l] != 3) return;
        MIBaseConfig cfg{};
        cfg.base = cur;
        int nt = 0, ng = 0;
        for (int l = 0; l < 21; ++l) {
            if (line_count[l] == 3) {
                if (nt >= 12) throw PlaneError("mi base: more than 12 trisecants");
                cfg.trisecants[nt++] = l;
            } else {
                if (ng >= 9) throw PlaneError("mi base: more than 9 tangents");
                cfg.tangents[ng++] = l;
            }
        }
        if (nt != 12 || ng != 9) throw PlaneError("mi base: bad secant profile");

        uint32_t base_mask = 0;
        for (int q : cfg.base) base_mask |= 1u << q;

        // Triangles: trisecant triples whose base points partition the base.
        int ntri = 0;
        for (int a = 0; a < 12; ++a)
            for (int b = a + 1; b < 12; ++b) {
                uint32_t ab = (plane.line_points[cfg.trisecants[a]] |
                               plane.line_points[cfg.trisecants[b]]) & base_mask;
                if (std::popcount(ab) != 6) continue;
                for (int c = b + 1; c < 12; ++c) {
                    uint32_t abc = (ab | plane.line_points[cfg.trisecants[c]]) & base_mask;
                    if (std::popcount(abc) != 9) continue;
                    if (ntri >= 4) throw PlaneError("mi base: more than 4 triangles");
                    cfg.triangles[ntri++] = {cfg.trisecants[a], cfg.trisecants[b],
                                             cfg.trisecants[c]};
                }
            }
        if (ntri != 4) throw PlaneError("mi base: expected exactly 4 triangles");

        uint32_t used = 0;
        for (auto& tri : cfg.triangles)
            for (int l : tri) {
                int pos = -1;
                for (int t = 0; t < 12; ++t)
                    if (cfg.trisecants[t] == l) pos = t;
                if (pos < 0) throw PlaneError("mi base: triangle line not a trisecant");
                used |= 1u << pos;
            }
        if (std::popcount(used) != 12)
            throw PlaneError("mi base: triangles do not partition the trisecants");

        std::vector<int> verts;
        for (auto& tri : cfg.triangles)
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int v = plane.meet(tri[i], tri[j]);
                    if ((base_mask >> v) & 1u) throw PlaneError("mi base: vertex inside base");
                    verts.push_back(v);
                }
        std::sort(verts.begin(), verts.end());
        if (std::unique(verts.begin(), verts.end()) != verts.end() || verts.size() != 12)
            throw PlaneError("mi base: expected 12 distinct vertices");
        uint32_t all = base_mask;
        for (std::size_t i = 0; i < 12; ++i) {
            cfg.vertices[i] = verts[i];
            all |= 1u << verts[i];
        }
        if (all != (1u << 21) - 1) throw PlaneError("mi base: base + vertices must cover the plane");
        out.push_back(cfg);
    };

    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == 9) {
            finish();
            return;
        }
        for (int q = start; q < 21; ++q) {
            if (21 - q < 9 - depth) break;
            bool ok = true;
            for (int l = 0; l < 21 && ok; ++l)
                if ((plane.line_points[l] >> q) & 1u)
                    if (line_count[l] >= 3) ok = false;
            if (!ok) continue;
            cur[depth] = q;
            for (int l = 0; l < 21; ++l)
                if ((plane.line_points[l] >> q) & 1u) ++line_count[l];
            self(self, depth + 1, q + 1);
            for (int l = 0; l < 21; ++l)
                if ((plane.line_points[l] >> q) & 1u) --line_count[l];
        }
    };
    rec(rec, 0, 0);
    return out;
}

std::string plane_to_json(const Plane& plane) {
    nlohmann::json j;
    auto triples = [](const std::array<HomTriple, 21>& src) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : src) arr.push_back({t[0], t[1], t[2]});
        return arr;
    };
    j["points"] = triples(plane.points);
    j["lines"] = triples(plane.lines);
    nlohmann::json inc = nlohmann::json::array();
    for (int l = 0; l < 21; ++l) {
        nlohmann::json row = nlohmann::json::array();
        for (int p = 0; p < 21; ++p) row.push_back(plane.incident(p, l) ? 1 : 0);
        inc.push_back(row);
    }
    j["incidence"] = inc;
    return j.dump(2);
}

}  // namespace k3enr::pg4
