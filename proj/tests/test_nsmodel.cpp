#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <set>

#include "k3enr/nsmodel.hpp"

using namespace k3enr;
using namespace k3enr::ns;

namespace {
const pg4::Plane& plane() {
    static pg4::Plane p = pg4::build_plane();
    return p;
}
const NSModel& model() {
    static NSModel m = build_ns_model(plane());
    return m;
}
const std::vector<pg4::Hyperoval>& hyps() {
    static auto h = pg4::hyperovals(plane());
    return h;
}
}  // namespace

TEST_CASE("NS model lattice invariants") {
    const NSModel& m = model();
    CHECK(m.induced.rank == 22);
    auto d = exactlat::smith_invariants(m.induced.induced);
    CHECK(d.det == -4);
    CHECK(d.group_invariants() == std::vector<exactlat::Int>{2, 2});
    CHECK(exactlat::signature(m.gram42) == exactlat::Signature{1, 21, 20});

    // Biplane-like incidence: each E meets exactly 5 L's and vice versa.
    for (int p = 0; p < 21; ++p) {
        int cnt = 0;
        for (int l = 0; l < 21; ++l)
            if (m.gram42.at(NSModel::e_index(p), NSModel::l_index(l)) == 1) ++cnt;
        CHECK(cnt == 5);
    }
    for (int l = 0; l < 21; ++l) {
        int cnt = 0;
        for (int p = 0; p < 21; ++p)
            if (m.gram42.at(NSModel::l_index(l), NSModel::e_index(p)) == 1) ++cnt;
        CHECK(cnt == 5);
    }
}

TEST_CASE("class h") {
    const NSModel& m = model();
    NSClass h = class_h(m, 0);
    CHECK(m.pair(h, h) == 2);
    // Well-defined: independent of the line choice, for all 21 lines.
    for (int l = 1; l < 21; ++l) CHECK(class_h(m, l) == h);
    // h.E_p = 0 and h.L_m = 1 for every generator.
    for (int p = 0; p < 21; ++p) CHECK(m.pair(h, m.generator(NSModel::e_index(p))) == 0);
    for (int l = 0; l < 21; ++l) CHECK(m.pair(h, m.generator(NSModel::l_index(l))) == 1);
}

TEST_CASE("the 168 (-4)-classes") {
    const NSModel& m = model();
    auto classes = all_minus_four_vectors(m, hyps());
    REQUIRE(classes.size() == 168);
    std::set<NSClass> dedup(classes.begin(), classes.end());
    CHECK(dedup.size() == 168);

    for (size_t k = 0; k < classes.size(); ++k) {
        const NSClass& r = classes[k];
        CHECK(m.pair(r, r) == -4);
        // Even pairing with every generator, i.e. r/2 lies in the dual lattice;
        // exactly the condition for the (-4)-reflection to be integral.
        for (int g = 0; g < 42; ++g) {
            exactlat::Int pr = m.pair(r, m.generator(g));
            CHECK(pr % 2 == 0);
        }
        const pg4::Hyperoval& s = hyps()[k];
        uint32_t mask = 0;
        for (int q : s) mask |= 1u << q;
        for (int p = 0; p < 21; ++p) {
            exactlat::Int expect = ((mask >> p) & 1u) ? 2 : 0;
            CHECK(m.pair(r, m.generator(NSModel::e_index(p))) == expect);
        }
        for (int l = 0; l < 21; ++l) {
            int sec = std::popcount(m.plane.line_points[l] & mask);
            CHECK(m.pair(r, m.generator(NSModel::l_index(l))) == 2 - sec);
        }
    }
}

TEST_CASE("reflection in a (-4)-class is integral on the induced lattice") {
    const NSModel& m = model();
    NSClass h = class_h(m, 0);
    NSClass r = minus_four_vector(m, hyps()[0]);
    CHECK(m.pair(h, r) == 4);  // 2 h^2 - sum h.E = 4
    // s_r(h) = h + (<h,r>/2) r = h + 2r.
    auto refl = exactlat::reflect(h.reduced, r.reduced, m.induced.induced);
    std::vector<exactlat::Int> expect(h.reduced);
    for (size_t i = 0; i < expect.size(); ++i) expect[i] += 2 * r.reduced[i];
    CHECK(refl == expect);

    // Integrality for all 168 classes against a generating set.
    auto classes = all_minus_four_vectors(m, hyps());
    for (const NSClass& rc : classes)
        for (int g = 0; g < 42; ++g)
            CHECK_NOTHROW(exactlat::reflect(m.generator(g).reduced, rc.reduced, m.induced.induced));
}

TEST_CASE("pairings between (-4)-classes: 8 - 2|S cap T|") {
    const NSModel& m = model();
    auto classes = all_minus_four_vectors(m, hyps());
    for (size_t a = 0; a < classes.size(); ++a) {
        uint32_t ma = 0;
        for (int q : hyps()[a]) ma |= 1u << q;
        for (size_t b = a; b < classes.size(); ++b) {
            uint32_t mb = 0;
            for (int q : hyps()[b]) mb |= 1u << q;
            exactlat::Int expect = 8 - 2 * std::popcount(ma & mb);
            CHECK(m.pair(classes[a], classes[b]) == expect);
        }
    }
}

TEST_CASE("orthogonal filter") {
    const NSModel& m = model();
    auto classes = all_minus_four_vectors(m, hyps());
    CHECK(orthogonal_filter(m, classes, {}).size() == 168);

    // MII contracted set from the default flag: 8 residual lines, ell itself
    // and the three exceptional curves over p3, p4, p5: exactly 12 classes
    // survive and they are the images of the special hyperovals.
    pg4::MIIFlag flag = pg4::default_mii_flag(m.plane);
    std::vector<std::string> curves;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) curves.push_back("L" + std::to_string(flag.l[i][j]));
    curves.push_back("L" + std::to_string(flag.ell));
    for (int k = 2; k < 5; ++k) curves.push_back("E" + std::to_string(flag.p[k]));
    auto kept = orthogonal_filter(m, classes, curves);
    CHECK(kept.size() == 12);

    auto special = pg4::mii_special_hyperovals(m.plane, flag);
    std::set<NSClass> expect;
    for (const auto& s : special) expect.insert(minus_four_vector(m, s));
    std::set<NSClass> got(kept.begin(), kept.end());
    CHECK(got == expect);
}
