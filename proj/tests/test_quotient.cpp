#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "k3enr/quotient.hpp"

using namespace k3enr;
using namespace k3enr::quot;
using k3enr::exactlat::Int;

namespace {

const pg4::Plane& plane() {
    static pg4::Plane p = pg4::build_plane();
    return p;
}
const ns::NSModel& nsm() {
    static ns::NSModel m = ns::build_ns_model(plane());
    return m;
}
const XModel& model(SurfaceKind k) {
    static std::map<SurfaceKind, XModel> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, build_surface(k, plane(), nsm())).first;
    return it->second;
}

std::vector<fib::KodairaFiber> fibs(const std::string& list) {
    return fib::FibrationConfig::parse(list, "k3").fibers;
}

}  // namespace

TEST_CASE("torsion section models") {
    // (I10, I10, I2, I2) with Z/10: 24 components and 10 sections.
    CurveConfigY vii = torsion_section_model(fibs("I10,I10,I2,I2"), {10});
    int comps = 0, secs = 0;
    for (const auto& r : vii.roles) {
        if (r.kind == CurveRole::Kind::FiberComponent) ++comps;
        if (r.kind == CurveRole::Kind::Section) ++secs;
    }
    CHECK(comps == 24);
    CHECK(secs == 10);

    // (I6, I6, I6, I6) with Z/6 x Z/3: 24 components and 18 sections.
    CurveConfigY mi = torsion_section_model(fibs("I6,I6,I6,I6"), {6, 3});
    comps = secs = 0;
    for (const auto& r : mi.roles) {
        if (r.kind == CurveRole::Kind::FiberComponent) ++comps;
        if (r.kind == CurveRole::Kind::Section) ++secs;
    }
    CHECK(comps == 24);
    CHECK(secs == 18);

    // (I8, I8, I1*) with Z/8: 22 components and 8 sections.
    CurveConfigY i8 = torsion_section_model(fibs("I8,I8,I1*"), {8});
    comps = secs = 0;
    for (const auto& r : i8.roles) {
        if (r.kind == CurveRole::Kind::FiberComponent) ++comps;
        if (r.kind == CurveRole::Kind::Section) ++secs;
    }
    CHECK(comps == 22);
    CHECK(secs == 8);

    // Wrong torsion hypothesis: discriminant identity fails.
    CHECK_THROWS_AS(torsion_section_model(fibs("I10,I10,I2,I2"), {5}), QuotientError);
}

TEST_CASE("MI integral sets: the six 2+2 assignments") {
    CurveConfigY cfg = build_y_config(SurfaceKind::MI, plane(), nsm());
    auto sets = identify_integral_sets(cfg, SurfaceKind::MI);
    CHECK(sets.size() == 6);
    for (const auto& set : sets) {
        CHECK(set.members.size() == 12);
        // Two fibers contribute their line halves, two their vertex halves.
        int line_fibers = 0;
        for (int f = 0; f < 4; ++f) {
            int lines = 0;
            for (int c : set.members)
                if (cfg.roles[c].fiber == f && cfg.labels[c][0] == 'L') ++lines;
            if (lines == 3) ++line_fibers;
        }
        CHECK(line_fibers == 2);
        // Pairwise disjoint.
        for (std::size_t a = 0; a < set.members.size(); ++a)
            for (std::size_t b = a + 1; b < set.members.size(); ++b)
                CHECK(cfg.gram.at(set.members[a], set.members[b]) == 0);
    }
}

TEST_CASE("MI surface model") {
    const XModel& xm = model(SurfaceKind::MI);
    CHECK(xm.curve_count() == 30);
    CHECK(xm.extra_count() == 10);
    CHECK(xm.points.size() == 12);
    for (const auto& p : xm.points) CHECK(p.type == CanonicalPoint::Type::A1);
    CHECK(xm.dropped.empty());

    // The 30 curves split into the E-side and L-side 15-sets; each curve is
    // tangent to exactly three members of the other set.
    std::vector<int> eside, lside;
    for (int i = 0; i < xm.size(); ++i) {
        if (!xm.effective[i]) continue;
        (xm.labels[i][0] == 'E' ? eside : lside).push_back(i);
    }
    CHECK(eside.size() == 15);
    CHECK(lside.size() == 15);
    auto tangencies = [&](int c, const std::vector<int>& others) {
        int t = 0;
        for (int o : others)
            for (const auto& e : xm.entries(c, o))
                if (e.mult == 2 && !xm.is_canonical(e.point)) ++t;
        return t;
    };
    for (int c : eside) CHECK(tangencies(c, lside) == 3);
    for (int c : lside) CHECK(tangencies(c, eside) == 3);
    // Within a 15-set: no tangencies, curves meet only at canonical points.
    for (int a : eside)
        for (int b : eside) {
            if (a >= b) continue;
            for (const auto& e : xm.entries(a, b)) CHECK(xm.is_canonical(e.point));
        }

    // Every curve passes through exactly two canonical points.
    for (int i = 0; i < xm.size(); ++i) {
        if (!xm.effective[i]) continue;
        int total = 0;
        for (auto [p, m] : xm.canonical_on[i]) total += m;
        CHECK(total == 2);
    }
}

TEST_CASE("VII surface model") {
    const XModel& xm = model(SurfaceKind::VII);
    CHECK(xm.curve_count() == 20);
    CHECK(xm.extra_count() == 0);
    CHECK(xm.points.size() == 12);
    CHECK(xm.dropped.size() == 2);  // the I2 fibers descend to the nodal I1 fibers
    for (const auto& [label, norm] : xm.dropped) CHECK(norm == 0);
}

TEST_CASE("MII surface model") {
    const XModel& xm = model(SurfaceKind::MII);
    CHECK(xm.curve_count() == 28);
    CHECK(xm.extra_count() == 12);
    REQUIRE(xm.points.size() == 9);
    int d4 = 0;
    for (const auto& p : xm.points)
        if (p.type == CanonicalPoint::Type::D4) ++d4;
    CHECK(d4 == 1);
    CHECK(xm.dropped.size() == 2);  // E1, E2 become singular rational curves
    for (const auto& [label, norm] : xm.dropped) {
        CHECK(label[0] == 'E');
        CHECK(norm == 4);
    }

    // Extra-class pairings are 4 - |S cap T| over the special hyperovals;
    // the computed profile is 8 pairings of 1 and 3 of 2 per class (every
    // grid cell lies on exactly 3 of the 12 permutation patterns, so
    // 12*4/16 = 3 disjoint pairs per vector).
    std::vector<int> extras;
    for (int i = 0; i < xm.size(); ++i)
        if (!xm.effective[i]) extras.push_back(i);
    REQUIRE(extras.size() == 12);
    for (int r : extras) {
        int ones = 0, twos = 0;
        for (int s : extras) {
            if (r == s) continue;
            if (xm.gram.at(r, s) == 1) ++ones;
            if (xm.gram.at(r, s) == 2) ++twos;
        }
        CHECK(ones + twos == 11);
        CHECK(ones == 8);
        CHECK(twos == 3);
    }

    // 16 grid curves meet only at the eight A1 points; the 12 line curves all
    // pass through the D4 point, in three groups of four pairwise tangent.
    int d4_point = -1;
    for (std::size_t p = 0; p < xm.points.size(); ++p)
        if (xm.points[p].type == CanonicalPoint::Type::D4) d4_point = static_cast<int>(p);
    std::vector<int> grid, lines;
    for (int i = 0; i < xm.size(); ++i) {
        if (!xm.effective[i]) continue;
        (xm.labels[i][0] == 'E' ? grid : lines).push_back(i);
    }
    CHECK(grid.size() == 16);
    CHECK(lines.size() == 12);
    for (int c : lines) CHECK(xm.canonical_on[c].count(d4_point));
    for (int a : lines)
        for (int b : lines) {
            if (a >= b) continue;
            Int g = xm.gram.at(a, b);
            CHECK((g == 1 || g == 2));
            for (const auto& e : xm.entries(a, b)) CHECK(e.point == d4_point);
        }
    for (int c : grid) {
        CHECK(!xm.canonical_on[c].count(d4_point));
        CHECK(xm.canonical_on[c].size() == 2);
    }
}

TEST_CASE("ledger sums equal Gram entries everywhere") {
    for (SurfaceKind k : {SurfaceKind::MI, SurfaceKind::VII, SurfaceKind::MII}) {
        const XModel& xm = model(k);
        for (int a = 0; a < xm.size(); ++a)
            for (int b = a + 1; b < xm.size(); ++b) {
                Int total = 0;
                for (const auto& e : xm.entries(a, b)) total += e.mult;
                CHECK(total == xm.gram.at(a, b));
            }
    }
}

TEST_CASE("descend unit behavior") {
    // A section meeting two integral curves lands on -2 (Lemma-level check).
    const XModel& xm = model(SurfaceKind::MI);
    for (int i = 0; i < xm.size(); ++i) CHECK(xm.gram.at(i, i) == -2);

    // Class span: rank 10, signature (1,9), unimodular.
    exactlat::GeneratedLattice gl = exactlat::generated_lattice(xm.gram);
    CHECK(gl.rank == 10);
    CHECK(exactlat::signature(gl.induced) == exactlat::Signature{1, 9, 0});
    CHECK(abs(exactlat::determinant(gl.induced.gram)) == 4);  // index-2 sublattice of Num(X)
}

TEST_CASE("MI choice independence") {
    CurveConfigY cfg = build_y_config(SurfaceKind::MI, plane(), nsm());
    auto sets = identify_integral_sets(cfg, SurfaceKind::MI);
    REQUIRE(sets.size() == 6);
    dynkin::WeightedGraph g0 = model(SurfaceKind::MI).graph();
    for (std::size_t k = 1; k < sets.size(); ++k) {
        BuildOptions opts;
        opts.integral_choice = static_cast<int>(k);
        XModel alt = build_surface(SurfaceKind::MI, plane(), nsm(), opts);
        CHECK(dynkin::find_isomorphism(g0, alt.graph(), true).has_value());
    }
}

TEST_CASE("VII torsion solution unique up to symmetry") {
    auto all = torsion_section_model_all(fibs("I10,I10,I2,I2"), {10});
    REQUIRE(!all.empty());
    dynkin::WeightedGraph g0 = dynkin::make_graph(
        all[0].labels, std::vector<char>(all[0].labels.size(), 1),
        [&] {
            std::vector<std::vector<int>> m(all[0].labels.size(),
                                            std::vector<int>(all[0].labels.size(), 0));
            for (std::size_t i = 0; i < all[0].labels.size(); ++i)
                for (std::size_t j = 0; j < all[0].labels.size(); ++j)
                    if (i != j) m[i][j] = static_cast<int>(all[0].gram.at(i, j).get_si());
            return m;
        }());
    for (std::size_t k = 1; k < all.size(); ++k) {
        std::vector<std::vector<int>> m(all[k].labels.size(),
                                        std::vector<int>(all[k].labels.size(), 0));
        for (std::size_t i = 0; i < all[k].labels.size(); ++i)
            for (std::size_t j = 0; j < all[k].labels.size(); ++j)
                if (i != j) m[i][j] = static_cast<int>(all[k].gram.at(i, j).get_si());
        auto gk = dynkin::make_graph(all[k].labels, std::vector<char>(all[k].labels.size(), 1), m);
        CHECK(dynkin::find_isomorphism(g0, gk, true).has_value());
    }
}

TEST_CASE("MI cross-validation against the torsion route") {
    // The plane-based MI and a torsion-built (I6^4, Z/6 x Z/3) model descend
    // to isomorphic 30-curve configurations.
    CurveConfigY tor = torsion_section_model(fibs("I6,I6,I6,I6"), {6, 3});
    auto sets = identify_integral_sets(tor, SurfaceKind::MI);
    REQUIRE(!sets.empty());
    XModel xt = descend(tor, sets[0], {}, nullptr);
    CHECK(xt.curve_count() == 30);
    CHECK(xt.points.size() == 12);

    // Compare effective subgraphs.
    const XModel& xp = model(SurfaceKind::MI);
    auto curve_graph = [](const XModel& xm) {
        std::vector<int> keep;
        for (int i = 0; i < xm.size(); ++i)
            if (xm.effective[i]) keep.push_back(i);
        std::vector<std::string> labels;
        std::vector<std::vector<int>> mult(keep.size(), std::vector<int>(keep.size(), 0));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            labels.push_back(xm.labels[keep[a]]);
            for (std::size_t b = 0; b < keep.size(); ++b)
                if (a != b) mult[a][b] = static_cast<int>(xm.gram.at(keep[a], keep[b]).get_si());
        }
        return dynkin::make_graph(labels, std::vector<char>(keep.size(), 1), mult);
    };
    CHECK(dynkin::find_isomorphism(curve_graph(xp), curve_graph(xt), true).has_value());
}

TEST_CASE("xmodel json export") {
    std::string j = xmodel_to_json(model(SurfaceKind::MII));
    CHECK(j.find("\"kind\": \"MII\"") != std::string::npos);
    CHECK(j.find("\"D4\"") != std::string::npos);
}
