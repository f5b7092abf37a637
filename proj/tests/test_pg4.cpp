#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <set>

#include "k3enr/pg4.hpp"

using namespace k3enr::pg4;

TEST_CASE("F4 field axioms, exhaustively") {
    for (uint8_t a = 0; a < 4; ++a) {
        CHECK(f4_add(a, 0) == a);
        CHECK(f4_mul(a, 1) == a);
        CHECK(f4_add(a, a) == 0);  // characteristic 2
        if (a != 0) CHECK(f4_mul(a, f4_inv(a)) == 1);
        for (uint8_t b = 0; b < 4; ++b) {
            CHECK(f4_add(a, b) == f4_add(b, a));
            CHECK(f4_mul(a, b) == f4_mul(b, a));
            for (uint8_t c = 0; c < 4; ++c) {
                CHECK(f4_add(f4_add(a, b), c) == f4_add(a, f4_add(b, c)));
                CHECK(f4_mul(f4_mul(a, b), c) == f4_mul(a, f4_mul(b, c)));
                CHECK(f4_mul(a, f4_add(b, c)) == f4_add(f4_mul(a, b), f4_mul(a, c)));
            }
        }
    }
    // w^2 = w + 1; multiplicative group cyclic of order 3.
    CHECK(f4_mul(2, 2) == 3);
    CHECK(f4_mul(2, 3) == 1);
    CHECK(f4_mul(3, 3) == 2);
}

TEST_CASE("plane axioms") {
    Plane pl = build_plane();
    for (int l = 0; l < 21; ++l) CHECK(std::popcount(pl.line_points[l]) == 5);
    for (int p = 0; p < 21; ++p) CHECK(std::popcount(pl.point_lines[p]) == 5);
    for (int p = 0; p < 21; ++p)
        for (int q = p + 1; q < 21; ++q) {
            int l = pl.line_through(p, q);
            CHECK(pl.incident(p, l));
            CHECK(pl.incident(q, l));
            CHECK(std::popcount(pl.point_lines[p] & pl.point_lines[q]) == 1);
        }
    // Deterministic ordering: rebuilding gives identical data.
    Plane pl2 = build_plane();
    CHECK(pl.points == pl2.points);
    CHECK(pl.line_points == pl2.line_points);
}

TEST_CASE("hyperovals: count 168 and secancy profile {0,2}") {
    Plane pl = build_plane();
    auto hs = hyperovals(pl);
    CHECK(hs.size() == 168);
    std::set<Hyperoval> dedup(hs.begin(), hs.end());
    CHECK(dedup.size() == 168);
    for (const auto& h : hs) {
        uint32_t mask = 0;
        for (int q : h) mask |= 1u << q;
        for (int l = 0; l < 21; ++l) {
            int sec = std::popcount(pl.line_points[l] & mask);
            CHECK((sec == 0 || sec == 2));
        }
    }
    // Each point lies on exactly 48 hyperovals (168 * 6 / 21).
    std::array<int, 21> per_point{};
    for (const auto& h : hs)
        for (int q : h) per_point[q]++;
    for (int p = 0; p < 21; ++p) CHECK(per_point[p] == 48);
}

TEST_CASE("mii special hyperovals: exactly 12") {
    Plane pl = build_plane();
    MIIFlag flag = default_mii_flag(pl);
    auto special = mii_special_hyperovals(pl, flag);
    CHECK(special.size() == 12);
    for (const auto& h : special) {
        uint32_t mask = 0;
        for (int q : h) mask |= 1u << q;
        CHECK(((mask >> flag.p[0]) & 1u) == 1u);
        CHECK(((mask >> flag.p[1]) & 1u) == 1u);
        for (int k = 2; k < 5; ++k) CHECK(((mask >> flag.p[k]) & 1u) == 0u);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) {
                // l_ij meets the hyperoval in exactly two points, p_i plus one other.
                uint32_t cap = pl.line_points[flag.l[i][j]] & mask;
                CHECK(std::popcount(cap) == 2);
                CHECK(((cap >> flag.p[i]) & 1u) == 1u);
            }
    }

    // All flags are projectively equivalent: the count is flag-independent.
    for (int ell : {3, 11, 20}) {
        std::vector<int> pts;
        for (int p = 0; p < 21; ++p)
            if (pl.incident(p, ell)) pts.push_back(p);
        MIIFlag f2 = make_mii_flag(pl, ell, pts[2], pts[4]);
        CHECK(mii_special_hyperovals(pl, f2).size() == 12);
    }

    MIIFlag bad = flag;
    bad.p[2] = flag.p[0];
    CHECK_THROWS_AS(mii_special_hyperovals(pl, bad), PlaneError);
}

TEST_CASE("mi base configurations") {
    Plane pl = build_plane();
    auto cfgs = mi_base_configurations(pl);
    REQUIRE(!cfgs.empty());

    const MIBaseConfig& c0 = cfgs.front();
    uint32_t base_mask = 0;
    for (int q : c0.base) base_mask |= 1u << q;

    // 12 trisecants, 9 tangents; every line hits the base in 1 or 3 points.
    for (int l : c0.trisecants) CHECK(std::popcount(pl.line_points[l] & base_mask) == 3);
    for (int l : c0.tangents) CHECK(std::popcount(pl.line_points[l] & base_mask) == 1);

    for (const auto& cfg : cfgs) {
        uint32_t bm = 0;
        for (int q : cfg.base) bm |= 1u << q;
        // Each triangle covers all nine base points.
        for (const auto& tri : cfg.triangles) {
            uint32_t cover = 0;
            for (int l : tri) cover |= pl.line_points[l] & bm;
            CHECK(std::popcount(cover) == 9);
        }
        // Base + vertices partition the 21 points.
        uint32_t vm = 0;
        for (int v : cfg.vertices) vm |= 1u << v;
        CHECK((bm & vm) == 0);
        CHECK((bm | vm) == (1u << 21) - 1);

        // Each base point: 4 trisecants (one per triangle) and 1 tangent.
        for (int q : cfg.base) {
            int nt = 0, ng = 0;
            for (int l : cfg.trisecants)
                if (pl.incident(q, l)) ++nt;
            for (int l : cfg.tangents)
                if (pl.incident(q, l)) ++ng;
            CHECK(nt == 4);
            CHECK(ng == 1);
            for (const auto& tri : cfg.triangles) {
                int on = 0;
                for (int l : tri)
                    if (pl.incident(q, l)) ++on;
                CHECK(on == 1);
            }
        }
        // Each tangent contains exactly 4 triangle vertices.
        for (int l : cfg.tangents) CHECK(std::popcount(pl.line_points[l] & vm) == 4);
    }
}
