#include "k3enr/quotient.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace k3enr::quot {

using exactlat::Rat;

std::string kind_name(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::MI: return "MI";
        case SurfaceKind::VII: return "VII";
        case SurfaceKind::MII: return "MII";
    }
    return "?";
}

SurfaceKind parse_kind(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "mi") return SurfaceKind::MI;
    if (t == "vii") return SurfaceKind::VII;
    if (t == "mii") return SurfaceKind::MII;
    throw QuotientError("unknown surface kind '" + s + "'");
}

int CurveConfigY::find_label(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    throw QuotientError("no curve labeled '" + label + "'");
}

std::vector<Int> CurveConfigY::fiber_class(int fiber) const {
    std::vector<Int> v(labels.size(), 0);
    for (std::size_t k = 0; k < fiber_components[fiber].size(); ++k) {
        int c = fiber_components[fiber][k];
        v[c] = roles[c].multiplicity;
    }
    return v;
}

namespace {

Int pair_in(const IntMat& gram, const std::vector<Int>& x, const std::vector<Int>& y) {
    Int acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) acc += x[i] * gram.at(i, j) * y[j];
    }
    return acc;
}

}  // namespace

void CurveConfigY::validate() const {
    const int n = static_cast<int>(labels.size());
    if (!gram.is_symmetric()) throw QuotientError("config Gram not symmetric");
    for (int i = 0; i < n; ++i)
        if (gram.at(i, i) != -2) throw QuotientError("config curve with norm != -2");

    for (std::size_t f = 0; f < fibers.size(); ++f) {
        const auto& comps = fiber_components[f];
        const fib::KodairaFiber& kf = fibers[f];
        if (static_cast<int>(comps.size()) != kf.components())
            throw QuotientError("fiber " + kf.name() + ": wrong component count");
        if (kf.sym == fib::FiberSym::In) {
            const int m = kf.n;
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b) {
                    Int expect = 0;
                    if (m == 2) expect = 2;
                    else if ((b - a) == 1 || (a == 0 && b == m - 1)) expect = 1;
                    if (gram.at(comps[a], comps[b]) != expect)
                        throw QuotientError("fiber " + kf.name() + ": not a Kodaira cycle");
                }
        } else if (kf.sym == fib::FiberSym::InStar) {
            // Doubles form a path; each end of the path carries two simple leaves.
            std::vector<int> simple, dbl;
            for (int c : comps)
                (roles[c].multiplicity == 2 ? dbl : simple).push_back(c);
            if (static_cast<int>(dbl.size()) != kf.n + 1 || simple.size() != 4)
                throw QuotientError("I_n*: bad multiplicity profile");
            for (int s : simple) {
                int hits = 0;
                for (int d : dbl)
                    if (gram.at(s, d) == 1) ++hits;
                if (hits != 1) throw QuotientError("I_n*: leaf not attached once");
            }
        }
    }
    for (int s = 0; s < n; ++s) {
        if (roles[s].kind != CurveRole::Kind::Section) continue;
        for (std::size_t f = 0; f < fibers.size(); ++f) {
            std::vector<Int> unit(n, 0);
            unit[s] = 1;
            if (pair_in(gram, unit, fiber_class(static_cast<int>(f))) != 1)
                throw QuotientError("section does not meet a fiber with multiplicity one");
        }
    }
}

// ---------------------------------------------------------------------------
// Torsion-section solver
// ---------------------------------------------------------------------------

namespace {

// mpq_class(a, b) does not canonicalize on its own.
Rat rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

struct LocalGroup {
    std::vector<int> factors;  // cyclic factors of the component group
    int order = 1;

    int add(int a, int b) const {
        int out = 0, stride = 1;
        for (int f : factors) {
            int xa = (a / stride) % f, xb = (b / stride) % f;
            out += ((xa + xb) % f) * stride;
            stride *= f;
        }
        return out;
    }
    int scale(int a, int k) const {
        int out = 0, stride = 1;
        for (int f : factors) {
            int xa = (a / stride) % f;
            out += ((xa * (k % f)) % f) * stride;
            stride *= f;
        }
        return out;
    }
};

struct FiberLocal {
    fib::KodairaFiber f;
    LocalGroup group;
    std::vector<int> elt_comp;             // group element -> component position
    std::vector<Rat> contr;                // element -> local height contribution
    std::vector<std::vector<Rat>> contr2;  // pair contribution, both elements nonzero
};

FiberLocal make_fiber_local(const fib::KodairaFiber& f) {
    FiberLocal fl;
    fl.f = f;
    if (f.sym == fib::FiberSym::In) {
        const int n = f.n;
        if (n < 2) throw QuotientError("torsion model needs reducible fibers (I_n, n >= 2)");
        fl.group.factors = {n};
        fl.group.order = n;
        fl.elt_comp.resize(n);
        std::iota(fl.elt_comp.begin(), fl.elt_comp.end(), 0);
        fl.contr.assign(n, 0);
        fl.contr2.assign(n, std::vector<Rat>(n, 0));
        for (int i = 1; i < n; ++i) fl.contr[i] = rat(i * (n - i), n);
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) {
                int a = std::min(i, j), b = std::max(i, j);
                fl.contr2[i][j] = rat(a * (n - b), n);
            }
        return fl;
    }
    if (f.sym == fib::FiberSym::InStar) {
        const int n = f.n;
        // Components: C0 (identity), C1 (near), C2, C3 (far), then the doubles.
        Rat far = Rat(1) + rat(n, 4);
        Rat farfar = rat(1, 2) + rat(n, 4);
        if (n % 2 == 1) {
            fl.group.factors = {4};
            fl.group.order = 4;
            fl.elt_comp = {0, 2, 1, 3};
            fl.contr = {0, far, 1, far};
            fl.contr2.assign(4, std::vector<Rat>(4, 0));
            fl.contr2[1][1] = far;
            fl.contr2[3][3] = far;
            fl.contr2[2][2] = 1;
            fl.contr2[1][3] = fl.contr2[3][1] = farfar;
            fl.contr2[1][2] = fl.contr2[2][1] = rat(1, 2);
            fl.contr2[2][3] = fl.contr2[3][2] = rat(1, 2);
        } else {
            fl.group.factors = {2, 2};
            fl.group.order = 4;
            fl.elt_comp = {0, 2, 3, 1};  // (1,0) -> C2, (0,1) -> C3, (1,1) -> C1
            fl.contr = {0, far, far, 1};
            fl.contr2.assign(4, std::vector<Rat>(4, 0));
            fl.contr2[1][1] = far;
            fl.contr2[2][2] = far;
            fl.contr2[3][3] = 1;
            fl.contr2[1][2] = fl.contr2[2][1] = farfar;
            fl.contr2[1][3] = fl.contr2[3][1] = rat(1, 2);
            fl.contr2[2][3] = fl.contr2[3][2] = rat(1, 2);
        }
        return fl;
    }
    if (f.sym == fib::FiberSym::IVStar) {
        fl.group.factors = {3};
        fl.group.order = 3;
        fl.elt_comp = {0, 1, 2};  // the three leaves
        fl.contr = {0, rat(4, 3), rat(4, 3)};
        fl.contr2.assign(3, std::vector<Rat>(3, 0));
        fl.contr2[1][1] = fl.contr2[2][2] = rat(4, 3);
        fl.contr2[1][2] = fl.contr2[2][1] = rat(2, 3);
        return fl;
    }
    throw QuotientError("torsion model: unsupported fiber type " + f.name());
}

struct TorsionSpace {
    std::vector<int> factors;
    int order = 1;
    std::vector<std::vector<int>> elements;  // tuples, lexicographic

    explicit TorsionSpace(const std::vector<int>& fs) : factors(fs) {
        for (int f : factors) order *= f;
        std::vector<int> cur(factors.size(), 0);
        for (int i = 0; i < order; ++i) {
            elements.push_back(cur);
            for (int d = static_cast<int>(factors.size()) - 1; d >= 0; --d) {
                if (++cur[d] < factors[d]) break;
                cur[d] = 0;
            }
        }
    }
};

struct TorsionSolution {
    std::vector<std::vector<int>> gen_images;  // per generator: local element per fiber
    std::vector<std::vector<int>> elt_local;   // per torsion element: local element per fiber
    std::vector<Int> po;                       // P_t . O
    IntMat pairs;                              // section-section intersections
};

std::vector<TorsionSolution> solve_torsion(const std::vector<FiberLocal>& locals,
                                           const TorsionSpace& ts, bool all_solutions) {
    const int nf = static_cast<int>(locals.size());
    const int ng = static_cast<int>(ts.factors.size());

    // Candidate images for one generator of order f: local element tuples
    // killed by f, with vanishing heights on the cyclic subgroup it generates.
    auto subgroup_ok = [&](const std::vector<int>& img, int f,
                           std::vector<Int>* po_out) -> bool {
        for (int k = 1; k < f; ++k) {
            Rat total = 0;
            for (int v = 0; v < nf; ++v) total += locals[v].contr[locals[v].group.scale(img[v], k)];
            Rat rhs = total - 4;  // 2 * (P.O) must be a non-negative even integer
            if (rhs < 0) return false;
            if (rhs.get_den() != 1 || rhs.get_num() % 2 != 0) return false;
            if (po_out) (*po_out)[k] = rhs.get_num() / 2;
        }
        return true;
    };

    std::vector<std::vector<std::vector<int>>> cand(ng);
    for (int gi = 0; gi < ng; ++gi) {
        const int f = ts.factors[gi];
        std::vector<int> img(nf, 0);
        auto rec = [&](auto&& self, int v) -> void {
            if (v == nf) {
                for (int vv = 0; vv < nf; ++vv)
                    if (locals[vv].group.scale(img[vv], f) != 0) return;
                if (!subgroup_ok(img, f, nullptr)) return;
                cand[gi].push_back(img);
                return;
            }
            for (int e = 0; e < locals[v].group.order; ++e) {
                img[v] = e;
                self(self, v + 1);
            }
            img[v] = 0;
        };
        rec(rec, 0);
    }

    std::vector<TorsionSolution> found;
    std::vector<std::vector<int>> chosen(ng);
    auto check_full = [&]() {
        TorsionSolution sol;
        sol.gen_images = chosen;
        sol.elt_local.assign(ts.order, std::vector<int>(nf, 0));
        for (int t = 0; t < ts.order; ++t)
            for (int v = 0; v < nf; ++v) {
                int acc = 0;
                for (int gi = 0; gi < ng; ++gi)
                    acc = locals[v].group.add(acc,
                                              locals[v].group.scale(chosen[gi][v], ts.elements[t][gi]));
                sol.elt_local[t][v] = acc;
            }
        std::set<std::vector<int>> dedup(sol.elt_local.begin(), sol.elt_local.end());
        if (static_cast<int>(dedup.size()) != ts.order) return;  // not injective

        sol.po.assign(ts.order, 0);
        for (int t = 1; t < ts.order; ++t) {
            Rat total = 0;
            for (int v = 0; v < nf; ++v) total += locals[v].contr[sol.elt_local[t][v]];
            Rat rhs = total - 4;
            if (rhs < 0 || rhs.get_den() != 1 || rhs.get_num() % 2 != 0) return;
            sol.po[t] = Int(rhs.get_num() / 2);
        }
        sol.pairs = IntMat(ts.order, ts.order);
        for (int t = 0; t < ts.order; ++t) sol.pairs.at(t, t) = -2;
        for (int t = 1; t < ts.order; ++t) {
            sol.pairs.at(0, t) = sol.po[t];
            sol.pairs.at(t, 0) = sol.po[t];
        }
        for (int t = 1; t < ts.order; ++t)
            for (int u = t + 1; u < ts.order; ++u) {
                Rat total = 0;
                for (int v = 0; v < nf; ++v) {
                    int a = sol.elt_local[t][v], b = sol.elt_local[u][v];
                    if (a != 0 && b != 0) total += locals[v].contr2[a][b];
                }
                Rat val = Rat(2) + Rat(sol.po[t].get_si() + sol.po[u].get_si()) - total;
                if (val < 0 || val.get_den() != 1) return;
                sol.pairs.at(t, u) = Int(val.get_num());
                sol.pairs.at(u, t) = Int(val.get_num());
            }
        found.push_back(std::move(sol));
    };

    auto rec = [&](auto&& self, int gi) -> void {
        if (!all_solutions && !found.empty()) return;
        if (gi == ng) {
            check_full();
            return;
        }
        for (const auto& img : cand[gi]) {
            chosen[gi] = img;
            self(self, gi + 1);
            if (!all_solutions && !found.empty()) return;
        }
    };
    rec(rec, 0);
    return found;
}

CurveConfigY config_from_solution(const std::vector<fib::KodairaFiber>& fibers,
                                  const std::vector<FiberLocal>& locals, const TorsionSpace& ts,
                                  const TorsionSolution& sol) {
    CurveConfigY cfg;
    cfg.fibers = fibers;
    std::vector<std::vector<int>> comp_index(fibers.size());

    for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
        const fib::KodairaFiber& f = fibers[fi];
        const std::string pre = "F" + std::to_string(fi) + ".";
        auto add_curve = [&](const std::string& name, int multiplicity) {
            CurveRole role;
            role.kind = CurveRole::Kind::FiberComponent;
            role.fiber = static_cast<int>(fi);
            role.position = static_cast<int>(comp_index[fi].size());
            role.multiplicity = multiplicity;
            cfg.labels.push_back(pre + name);
            cfg.roles.push_back(role);
            cfg.ns_gen.push_back(-1);
            comp_index[fi].push_back(static_cast<int>(cfg.labels.size()) - 1);
        };
        if (f.sym == fib::FiberSym::In) {
            for (int k = 0; k < f.n; ++k) add_curve("C" + std::to_string(k), 1);
        } else if (f.sym == fib::FiberSym::InStar) {
            for (int k = 0; k < 4; ++k) add_curve("C" + std::to_string(k), 1);
            for (int k = 0; k <= f.n; ++k) add_curve("D" + std::to_string(k), 2);
        } else if (f.sym == fib::FiberSym::IVStar) {
            for (int k = 0; k < 3; ++k) add_curve("L" + std::to_string(k), 1);
            for (int k = 0; k < 3; ++k) add_curve("M" + std::to_string(k), 2);
            add_curve("Z", 3);
        }
    }
    const int nsec = ts.order;
    for (int t = 0; t < nsec; ++t) {
        CurveRole role;
        role.kind = CurveRole::Kind::Section;
        role.section = t;
        cfg.labels.push_back("S" + std::to_string(t));
        cfg.roles.push_back(role);
        cfg.ns_gen.push_back(-1);
    }

    const int n = static_cast<int>(cfg.labels.size());
    cfg.gram = IntMat(n, n);
    for (int i = 0; i < n; ++i) cfg.gram.at(i, i) = -2;
    auto set_pair = [&](int a, int b, int v) {
        cfg.gram.at(a, b) = v;
        cfg.gram.at(b, a) = v;
    };
    for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
        const fib::KodairaFiber& f = fibers[fi];
        const auto& ci = comp_index[fi];
        if (f.sym == fib::FiberSym::In) {
            if (f.n == 2) set_pair(ci[0], ci[1], 2);
            else
                for (int k = 0; k < f.n; ++k) set_pair(ci[k], ci[(k + 1) % f.n], 1);
        } else if (f.sym == fib::FiberSym::InStar) {
            set_pair(ci[0], ci[4], 1);
            set_pair(ci[1], ci[4], 1);
            set_pair(ci[2], ci[4 + f.n], 1);
            set_pair(ci[3], ci[4 + f.n], 1);
            for (int k = 0; k < f.n; ++k) set_pair(ci[4 + k], ci[5 + k], 1);
        } else if (f.sym == fib::FiberSym::IVStar) {
            for (int k = 0; k < 3; ++k) {
                set_pair(ci[k], ci[3 + k], 1);
                set_pair(ci[3 + k], ci[6], 1);
            }
        }
    }
    const int sec0 = n - nsec;
    for (int t = 0; t < nsec; ++t)
        for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
            int comp = locals[fi].elt_comp[sol.elt_local[t][fi]];
            set_pair(sec0 + t, comp_index[fi][comp], 1);
        }
    for (int t = 0; t < nsec; ++t)
        for (int u = t + 1; u < nsec; ++u)
            set_pair(sec0 + t, sec0 + u, static_cast<int>(sol.pairs.at(t, u).get_si()));

    cfg.fiber_components = std::move(comp_index);
    cfg.validate();

    // All fiber classes agree in the lattice spanned by the configuration.
    exactlat::GeneratedLattice gl = exactlat::generated_lattice(cfg.gram);
    std::vector<Int> first = gl.project(cfg.fiber_class(0));
    for (std::size_t fi = 1; fi < fibers.size(); ++fi)
        if (gl.project(cfg.fiber_class(static_cast<int>(fi))) != first)
            throw QuotientError("torsion model: fiber classes differ in the span");
    return cfg;
}

}  // namespace

CurveConfigY torsion_section_model(const std::vector<fib::KodairaFiber>& fibers,
                                   const std::vector<int>& torsion) {
    auto all = torsion_section_model_all(fibers, torsion);
    if (all.empty()) throw QuotientError("torsion model: no consistent section assignment");
    return all.front();
}

std::vector<CurveConfigY> torsion_section_model_all(const std::vector<fib::KodairaFiber>& fibers,
                                                    const std::vector<int>& torsion) {
    long long order = 1;
    for (int f : torsion) order *= f;
    long long disc = 1;
    for (const auto& f : fibers) disc *= f.discriminant();
    if (order * order * 4 != disc)
        throw QuotientError("torsion model: |T|^2 * 4 != product of fiber discriminants (" +
                            std::to_string(order * order * 4) + " vs " + std::to_string(disc) +
                            ")");

    std::vector<FiberLocal> locals;
    for (const auto& f : fibers) locals.push_back(make_fiber_local(f));
    TorsionSpace ts(torsion);
    std::vector<CurveConfigY> out;
    for (const auto& sol : solve_torsion(locals, ts, true))
        out.push_back(config_from_solution(fibers, locals, ts, sol));
    return out;
}

// ---------------------------------------------------------------------------
// Plane-based configurations (MI and MII)
// ---------------------------------------------------------------------------

namespace {

CurveConfigY config_from_ns(const ns::NSModel& model, const std::vector<int>& gens) {
    CurveConfigY cfg;
    const int n = static_cast<int>(gens.size());
    cfg.gram = IntMat(n, n);
    for (int i = 0; i < n; ++i) {
        cfg.labels.push_back(model.labels[gens[i]]);
        cfg.ns_gen.push_back(gens[i]);
        for (int j = 0; j < n; ++j) cfg.gram.at(i, j) = model.gram42.at(gens[i], gens[j]);
    }
    cfg.roles.assign(n, CurveRole{});
    return cfg;
}

CurveConfigY build_mi_config(const pg4::Plane& plane, const ns::NSModel& model, int base_choice) {
    auto bases = pg4::mi_base_configurations(plane);
    if (bases.empty()) throw QuotientError("MI: no base configuration found");
    if (base_choice < 0 || base_choice >= static_cast<int>(bases.size()))
        throw QuotientError("MI: base configuration index out of range");
    const pg4::MIBaseConfig& bc = bases[base_choice];

    // Generator order: the four hexagons (triangle lines alternating with the
    // vertex exceptionals), then 9 base-point sections, then 9 tangent-line
    // sections: all 42 generators.
    std::vector<int> gens;
    std::vector<fib::KodairaFiber> fibers;
    std::vector<std::vector<int>> comps;
    for (int t = 0; t < 4; ++t) {
        auto tri = bc.triangles[t];
        std::sort(tri.begin(), tri.end());
        int v01 = plane.meet(tri[0], tri[1]);
        int v12 = plane.meet(tri[1], tri[2]);
        int v02 = plane.meet(tri[0], tri[2]);
        std::vector<int> hexagon = {
            ns::NSModel::l_index(tri[0]), ns::NSModel::e_index(v01),
            ns::NSModel::l_index(tri[1]), ns::NSModel::e_index(v12),
            ns::NSModel::l_index(tri[2]), ns::NSModel::e_index(v02)};
        std::vector<int> local;
        for (int g : hexagon) {
            local.push_back(static_cast<int>(gens.size()));
            gens.push_back(g);
        }
        comps.push_back(local);
        fibers.push_back(fib::KodairaFiber{fib::FiberSym::In, 6, false});
    }
    std::vector<int> sections;
    for (int b : bc.base) sections.push_back(ns::NSModel::e_index(b));
    for (int t : bc.tangents) sections.push_back(ns::NSModel::l_index(t));

    CurveConfigY cfg;
    {
        std::vector<int> all = gens;
        all.insert(all.end(), sections.begin(), sections.end());
        cfg = config_from_ns(model, all);
    }
    cfg.fibers = fibers;
    cfg.fiber_components = comps;
    for (std::size_t f = 0; f < comps.size(); ++f)
        for (std::size_t p = 0; p < comps[f].size(); ++p) {
            CurveRole& r = cfg.roles[comps[f][p]];
            r.kind = CurveRole::Kind::FiberComponent;
            r.fiber = static_cast<int>(f);
            r.position = static_cast<int>(p);
        }
    for (int s = 0; s < 18; ++s) {
        CurveRole& r = cfg.roles[24 + s];
        r.kind = CurveRole::Kind::Section;
        r.section = s;
    }
    cfg.validate();
    return cfg;
}

CurveConfigY build_mii_config(const pg4::Plane& plane, const ns::NSModel& model) {
    pg4::MIIFlag flag = pg4::default_mii_flag(plane);
    auto gp = [&](int i, int j) { return plane.meet(flag.l[0][i], flag.l[1][j]); };

    auto L = [&](int line) { return ns::NSModel::l_index(line); };
    auto E = [&](int point) { return ns::NSModel::e_index(point); };

    // Each residual line m through p5 meets the 4x4 grid of points
    // l_1i ^ l_2j in four cells, one per row; the fibration needs a pair of
    // such lines covering A x D and B x C for 2+2 splits {A,B} of the rows
    // and {C,D} of the columns. The I8 fibers then live on A x C and B x D.
    std::vector<int> p5_lines;
    for (int l = 0; l < 21; ++l)
        if (l != flag.ell && plane.incident(flag.p[4], l)) p5_lines.push_back(l);
    if (p5_lines.size() != 4) throw QuotientError("MII: expected four residual lines through p5");

    auto cells_of = [&](int m) {
        std::vector<std::pair<int, int>> cells;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (plane.incident(gp(i, j), m)) cells.push_back({i, j});
        if (cells.size() != 4) throw QuotientError("MII: residual line misses the grid");
        return cells;
    };

    const std::array<std::array<int, 4>, 3> splits = {{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    std::optional<std::pair<int, int>> fpair;
    std::array<int, 2> rowsA{}, rowsB{}, colsC{}, colsD{};
    for (std::size_t a = 0; a < p5_lines.size() && !fpair; ++a)
        for (std::size_t b = a + 1; b < p5_lines.size() && !fpair; ++b) {
            std::set<std::pair<int, int>> fcells;
            for (auto c : cells_of(p5_lines[a])) fcells.insert(c);
            for (auto c : cells_of(p5_lines[b])) fcells.insert(c);
            if (fcells.size() != 8) continue;
            for (const auto& rs : splits)
                for (const auto& cs0 : splits)
                    for (int flip = 0; flip < 2 && !fpair; ++flip) {
                        std::array<int, 4> cs = cs0;
                        if (flip) cs = {cs0[2], cs0[3], cs0[0], cs0[1]};
                        std::set<std::pair<int, int>> want;
                        for (int i : {rs[0], rs[1]})
                            for (int j : {cs[2], cs[3]}) want.insert({i, j});
                        for (int i : {rs[2], rs[3]})
                            for (int j : {cs[0], cs[1]}) want.insert({i, j});
                        if (want == fcells) {
                            fpair = {p5_lines[a], p5_lines[b]};
                            rowsA = {rs[0], rs[1]};
                            rowsB = {rs[2], rs[3]};
                            colsC = {cs[0], cs[1]};
                            colsD = {cs[2], cs[3]};
                        }
                    }
        }
    if (!fpair) throw QuotientError("MII: no line pair through p5 completes the I1* fiber");

    auto cycle = [&](std::array<int, 2> rows, std::array<int, 2> cols) {
        return std::vector<int>{L(flag.l[0][rows[0]]), E(gp(rows[0], cols[0])),
                                L(flag.l[1][cols[0]]), E(gp(rows[1], cols[0])),
                                L(flag.l[0][rows[1]]), E(gp(rows[1], cols[1])),
                                L(flag.l[1][cols[1]]), E(gp(rows[0], cols[1]))};
    };
    std::vector<int> fiber0 = cycle(rowsA, colsC);
    std::vector<int> fiber1 = cycle(rowsB, colsD);

    std::vector<int> fiber2 = {E(flag.p[2]), E(flag.p[3]), L(flag.ell),
                               E(flag.p[4]), L(fpair->first), L(fpair->second)};
    std::vector<int> fiber2_mult = {1, 1, 2, 2, 1, 1};

    // The three fiber divisors must agree as classes.
    std::vector<Int> raw0(42, 0), raw1(42, 0), raw2(42, 0);
    for (int g : fiber0) raw0[g] += 1;
    for (int g : fiber1) raw1[g] += 1;
    for (std::size_t k = 0; k < fiber2.size(); ++k) raw2[fiber2[k]] += fiber2_mult[k];
    ns::NSClass c0 = model.make_class(raw0);
    if (!(model.make_class(raw1) == c0) || !(model.make_class(raw2) == c0))
        throw QuotientError("MII: fiber divisors are not numerically equal");

    std::vector<int> gens;
    for (int g : fiber0) gens.push_back(g);
    for (int g : fiber1) gens.push_back(g);
    for (int g : fiber2) gens.push_back(g);
    std::vector<char> used(42, 0);
    for (int g : gens) used[g] = 1;
    for (int g = 0; g < 42; ++g)
        if (!used[g]) gens.push_back(g);

    CurveConfigY cfg = config_from_ns(model, gens);
    cfg.fibers = {fib::KodairaFiber{fib::FiberSym::In, 8, false},
                  fib::KodairaFiber{fib::FiberSym::In, 8, false},
                  fib::KodairaFiber{fib::FiberSym::InStar, 1, false}};
    cfg.fiber_components = {{0, 1, 2, 3, 4, 5, 6, 7},
                            {8, 9, 10, 11, 12, 13, 14, 15},
                            {16, 17, 18, 19, 20, 21}};
    for (int f = 0; f < 3; ++f)
        for (std::size_t p = 0; p < cfg.fiber_components[f].size(); ++p) {
            CurveRole& r = cfg.roles[cfg.fiber_components[f][p]];
            r.kind = CurveRole::Kind::FiberComponent;
            r.fiber = f;
            r.position = static_cast<int>(p);
            if (f == 2) r.multiplicity = fiber2_mult[p];
        }
    // Sections: leftover generators pairing 1 with the fiber class.
    int sec = 0;
    std::vector<Int> fclass = cfg.fiber_class(0);
    for (int i = 22; i < 42; ++i) {
        std::vector<Int> unit(42, 0);
        unit[i] = 1;
        Int p = pair_in(cfg.gram, unit, fclass);
        if (p == 1) {
            cfg.roles[i].kind = CurveRole::Kind::Section;
            cfg.roles[i].section = sec++;
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace

CurveConfigY build_y_config(SurfaceKind kind, const pg4::Plane& plane, const ns::NSModel& model) {
    switch (kind) {
        case SurfaceKind::MI: return build_mi_config(plane, model, 0);
        case SurfaceKind::MII: return build_mii_config(plane, model);
        case SurfaceKind::VII:
            return torsion_section_model({fib::KodairaFiber::parse("I10"),
                                          fib::KodairaFiber::parse("I10"),
                                          fib::KodairaFiber::parse("I2"),
                                          fib::KodairaFiber::parse("I2")},
                                         {10});
    }
    throw QuotientError("unreachable");
}

std::vector<IntegralSet> identify_integral_sets(const CurveConfigY& config, SurfaceKind kind) {
    if (kind == SurfaceKind::MII) {
        // Lemma-level data: the eight residual lines in the I8 fibers, plus
        // E3, E4, E5; the line L is contracted second, after its chain.
        IntegralSet set;
        for (int f = 0; f < 2; ++f)
            for (int c : config.fiber_components[f])
                if (config.labels[c][0] == 'L') set.members.push_back(c);
        const auto& star = config.fiber_components[2];
        set.members.push_back(star[0]);  // E_p3
        set.members.push_back(star[1]);  // E_p4
        set.members.push_back(star[3]);  // E_p5
        set.secondary = star[2];         // L
        if (set.members.size() != 11) throw QuotientError("MII: expected 11 integral curves");
        return {set};
    }

    // MI / VII: alternating halves per I_n fiber, one component per I2.
    std::vector<std::vector<std::vector<int>>> choices;
    for (std::size_t f = 0; f < config.fibers.size(); ++f) {
        const auto& comps = config.fiber_components[f];
        const int n = config.fibers[f].n;
        if (config.fibers[f].sym != fib::FiberSym::In)
            throw QuotientError("integral-set search expects multiplicative fibers");
        if (n == 2) {
            choices.push_back({{comps[0]}, {comps[1]}});
        } else {
            if (n % 2 != 0) throw QuotientError("integral-set search needs even cycles");
            std::vector<int> even, odd;
            for (int k = 0; k < n; ++k) (k % 2 == 0 ? even : odd).push_back(comps[k]);
            choices.push_back({even, odd});
        }
    }
    std::vector<int> sections;
    for (int i = 0; i < static_cast<int>(config.labels.size()); ++i)
        if (config.roles[i].kind == CurveRole::Kind::Section) sections.push_back(i);

    std::vector<IntegralSet> out;
    const int nf = static_cast<int>(choices.size());
    for (int mask = 0; mask < (1 << nf); ++mask) {
        IntegralSet set;
        for (int f = 0; f < nf; ++f)
            for (int c : choices[f][(mask >> f) & 1]) set.members.push_back(c);
        bool ok = true;
        for (int s : sections) {
            Int acc = 0;
            for (int e : set.members) acc += config.gram.at(s, e);
            if (acc != 2) { ok = false; break; }
        }
        if (ok) out.push_back(std::move(set));
    }
    if (out.empty()) throw QuotientError("no admissible integral set");
    return out;
}

// ---------------------------------------------------------------------------
// Descent
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

const std::vector<LedgerEntry>& XModel::entries(int a, int b) const {
    static const std::vector<LedgerEntry> empty;
    auto it = ledger.find({std::min(a, b), std::max(a, b)});
    return it == ledger.end() ? empty : it->second;
}

int XModel::curve_count() const {
    int n = 0;
    for (char e : effective) n += e ? 1 : 0;
    return n;
}

int XModel::extra_count() const { return size() - curve_count(); }

dynkin::WeightedGraph XModel::graph() const {
    std::vector<std::vector<int>> mult(size(), std::vector<int>(size(), 0));
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (i != j) {
                const Int& v = gram.at(i, j);
                if (v < 0) throw QuotientError("negative pairing in the descended model");
                mult[i][j] = static_cast<int>(v.get_si());
            }
    return dynkin::make_graph(labels, effective, mult);
}

XModel descend(const CurveConfigY& config, const IntegralSet& integral,
               const std::vector<ns::NSClass>& extras, const ns::NSModel* model) {
    const int nc = static_cast<int>(config.labels.size());
    const int ne = static_cast<int>(extras.size());
    const int n = nc + ne;
    if (ne > 0 && model == nullptr)
        throw QuotientError("descend: extra classes need the NS model for their pairings");

    std::vector<std::string> labels = config.labels;
    for (int e = 0; e < ne; ++e) labels.push_back("r" + std::to_string(e + 1));

    std::vector<char> is_integral(n, 0);
    for (int e : integral.members) is_integral[e] = 1;
    std::vector<char> is_extra(n, 0);
    for (int e = 0; e < ne; ++e) is_extra[nc + e] = 1;
    std::vector<int> weight(n, 2);
    for (int i = 0; i < n; ++i)
        if (is_integral[i] || is_extra[i]) weight[i] = 1;

    // Upstairs Gram over curves and extras.
    IntMat up(n, n);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) up.at(i, j) = config.gram.at(i, j);
    for (int e = 0; e < ne; ++e) {
        for (int i = 0; i < nc; ++i) {
            if (config.ns_gen[i] < 0)
                throw QuotientError("descend: extras require NS-backed curves");
            Int acc = 0;
            for (int j = 0; j < 42; ++j)
                if (extras[e].raw[j] != 0)
                    acc += extras[e].raw[j] * model->gram42.at(j, config.ns_gen[i]);
            up.at(nc + e, i) = acc;
            up.at(i, nc + e) = acc;
        }
        for (int f = 0; f < ne; ++f) up.at(nc + e, nc + f) = model->pair_raw(extras[e].raw, extras[f].raw);
    }
    for (int e = 0; e < ne; ++e)
        for (int m : integral.members)
            if (up.at(nc + e, m) != 0)
                throw QuotientError("descend: extra class not orthogonal to an integral curve");

    // Downstairs pre-blowdown pairing: w_u w_v <u,v> / 2.
    IntMat d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Int v = Int(weight[i]) * Int(weight[j]) * up.at(i, j);
            if (v % 2 != 0)
                throw QuotientError("descend: non-integral downstairs pairing between " +
                                    labels[i] + " and " + labels[j]);
            d.at(i, j) = v / 2;
        }
    IntMat d0 = d;

    // Contraction events, in dependency order.
    std::vector<char> contracted(n, 0);
    struct Event {
        int e;
        std::vector<Int> row;
    };
    std::vector<Event> events;
    while (true) {
        int next = -1;
        for (int i = 0; i < n && next < 0; ++i)
            if (!contracted[i] && d.at(i, i) == -1) next = i;
        if (next < 0) break;
        Event ev;
        ev.e = next;
        ev.row.assign(n, 0);
        for (int u = 0; u < n; ++u)
            if (!contracted[u] && u != next) ev.row[u] = d.at(u, next);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (contracted[u] || contracted[v] || u == next || v == next) continue;
                d.at(u, v) += ev.row[u] * ev.row[v];
            }
        contracted[next] = 1;
        events.push_back(std::move(ev));
    }
    for (int e : integral.members)
        if (!contracted[e])
            throw QuotientError("descend: integral curve " + labels[e] +
                                " never reached self-intersection -1");
    if (integral.secondary >= 0 && !contracted[integral.secondary])
        throw QuotientError("descend: secondary contraction never became available");

    // Canonical points: connected components of the contracted subgraph.
    std::vector<int> contracted_list;
    for (int i = 0; i < n; ++i)
        if (contracted[i]) contracted_list.push_back(i);
    UnionFind uf(n);
    for (int a : contracted_list)
        for (int b : contracted_list)
            if (a < b && up.at(a, b) != 0) uf.unite(a, b);
    std::map<int, std::vector<int>> comps;
    for (int a : contracted_list) comps[uf.find(a)].push_back(a);

    XModel xm;
    std::map<int, int> point_of_rep;
    for (const auto& [rep, members] : comps) {
        CanonicalPoint pt;
        if (members.size() == 1) pt.type = CanonicalPoint::Type::A1;
        else if (members.size() == 4) pt.type = CanonicalPoint::Type::D4;
        else
            throw QuotientError("descend: contracted component of unexpected size " +
                                std::to_string(members.size()));
        for (int mm : members) pt.members.push_back(labels[mm]);
        point_of_rep[rep] = static_cast<int>(xm.points.size());
        xm.points.push_back(std::move(pt));
    }
    auto point_of = [&](int e) { return point_of_rep.at(uf.find(e)); };
    const int ncanon = static_cast<int>(xm.points.size());

    // Survivors; effective curves must land on -2, anything else is dropped
    // (fibers of arithmetic genus one: nodal I1 images, cuspidal images).
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        if (contracted[i]) continue;
        if (!is_extra[i] && d.at(i, i) != -2) {
            // Images of non-negative self-intersection are fibers or singular
            // rational curves, not nodal curves of the model.
            if (d.at(i, i) < 0)
                throw QuotientError("descend: class " + labels[i] + " landed on norm " +
                                    d.at(i, i).get_str());
            xm.dropped.push_back({labels[i], d.at(i, i)});
            continue;
        }
        if (is_extra[i] && d.at(i, i) != -2)
            throw QuotientError("descend: extra class " + labels[i] + " not of norm -2");
        keep.push_back(i);
    }

    std::vector<int> pos(n, -1);
    for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<int>(k);
    const int m = static_cast<int>(keep.size());
    xm.labels.clear();
    xm.effective.assign(m, 1);
    xm.weight.assign(m, 2);
    xm.gram = IntMat(m, m);
    xm.canonical_on.assign(m, {});
    for (int k = 0; k < m; ++k) {
        xm.labels.push_back(labels[keep[k]]);
        xm.effective[k] = is_extra[keep[k]] ? 0 : 1;
        xm.weight[k] = weight[keep[k]];
        for (int l = 0; l < m; ++l) xm.gram.at(k, l) = d.at(keep[k], keep[l]);
    }

    // Ledger: direct crossings at fresh generic points, contraction credits
    // at canonical points.
    int generic = ncanon;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            int i = keep[a], j = keep[b];
            std::vector<LedgerEntry> entries;
            Int direct = d0.at(i, j);
            if (direct > 0) {
                if (!is_extra[i] && !is_extra[j]) {
                    // w = 2 on both sides: each K3 crossing point maps to one
                    // tangency point downstairs.
                    Int crossings = up.at(i, j);
                    for (Int c = 0; c < crossings; ++c) entries.push_back({generic++, 2});
                } else {
                    entries.push_back({generic++, static_cast<int>(direct.get_si())});
                }
            }
            for (const Event& ev : events) {
                Int credit = ev.row[i] * ev.row[j];
                if (credit > 0)
                    entries.push_back({point_of(ev.e), static_cast<int>(credit.get_si())});
            }
            // Merge repeated points (chain contractions credit the same point).
            std::map<int, int> merged;
            for (const auto& e : entries) merged[e.point] += e.mult;
            std::vector<LedgerEntry> out;
            Int total = 0;
            for (auto [p, mlt] : merged) {
                out.push_back({p, mlt});
                total += mlt;
            }
            if (total != xm.gram.at(a, b))
                throw QuotientError("descend: ledger does not sum to the Gram entry for " +
                                    xm.labels[a] + "." + xm.labels[b]);
            if (!out.empty()) xm.ledger[{a, b}] = std::move(out);
        }
    xm.generic_points = generic - ncanon;

    for (const Event& ev : events)
        for (int k = 0; k < m; ++k) {
            Int c = ev.row[keep[k]];
            if (c > 0) xm.canonical_on[k][point_of(ev.e)] += static_cast<int>(c.get_si());
        }

    // Every kept effective curve carries total contraction multiplicity two
    // (two blown-up points, infinitely near ones included).
    for (int k = 0; k < m; ++k) {
        if (!xm.effective[k]) continue;
        int total = 0;
        for (auto [p, mlt] : xm.canonical_on[k]) total += mlt;
        if (total != 2)
            throw QuotientError("descend: curve " + xm.labels[k] + " has contraction credit " +
                                std::to_string(total));
    }
    return xm;
}

XModel build_surface(SurfaceKind kind, const pg4::Plane& plane, const ns::NSModel& model,
                     const BuildOptions& opts) {
    CurveConfigY cfg = kind == SurfaceKind::MI ? build_mi_config(plane, model, opts.base_choice)
                                               : build_y_config(kind, plane, model);
    auto sets = identify_integral_sets(cfg, kind);
    if (opts.integral_choice < 0 || opts.integral_choice >= static_cast<int>(sets.size()))
        throw QuotientError("integral set choice out of range");
    const IntegralSet& set = sets[opts.integral_choice];

    std::vector<ns::NSClass> extras;
    std::vector<pg4::Hyperoval> provenance;
    if (kind != SurfaceKind::VII) {
        auto hyps = pg4::hyperovals(plane);
        auto classes = ns::all_minus_four_vectors(model, hyps);
        std::vector<std::string> curve_labels;
        for (int e : set.members) curve_labels.push_back(cfg.labels[e]);
        if (set.secondary >= 0) curve_labels.push_back(cfg.labels[set.secondary]);
        auto keep = ns::orthogonal_filter(model, classes, curve_labels);
        std::set<std::vector<Int>> kept_set;
        for (const auto& c : keep) kept_set.insert(c.reduced);
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (kept_set.count(classes[k].reduced)) provenance.push_back(hyps[k]);
        extras = std::move(keep);
    }

    XModel xm = descend(cfg, set, extras, kind == SurfaceKind::VII ? nullptr : &model);
    xm.kind = kind;
    xm.extra_provenance = std::move(provenance);

    const int expected_curves = kind == SurfaceKind::MI ? 30 : (kind == SurfaceKind::VII ? 20 : 28);
    const int expected_extras = kind == SurfaceKind::MI ? 10 : (kind == SurfaceKind::VII ? 0 : 12);
    if (xm.curve_count() != expected_curves)
        throw QuotientError(kind_name(kind) + ": expected " + std::to_string(expected_curves) +
                            " nodal curves, got " + std::to_string(xm.curve_count()));
    if (xm.extra_count() != expected_extras)
        throw QuotientError(kind_name(kind) + ": wrong number of extra classes");

    exactlat::GeneratedLattice gl = exactlat::generated_lattice(xm.gram);
    if (gl.rank != 10) throw QuotientError(kind_name(kind) + ": class span has rank != 10");
    exactlat::Signature sig = exactlat::signature(gl.induced);
    if (!(sig.positive == 1 && sig.negative == 9))
        throw QuotientError(kind_name(kind) + ": span signature is not (1,9)");
    return xm;
}

// ---------------------------------------------------------------------------
// Fibrations read off a model
// ---------------------------------------------------------------------------

std::string FibrationView::type_string() const {
    std::vector<std::pair<int, std::string>> parts;
    for (const auto& f : fibers) parts.push_back({-f.type.euler_base(), f.type.name()});
    for (std::size_t k = 0; k < invisible_nodes.size(); ++k) parts.push_back({-1, "I1"});
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += parts[i].second;
        if (i + 1 < parts.size()) out += ",";
    }
    return out + ")";
}

FibrationView fibration_view(const XModel& xm, const std::vector<Int>& ray) {
    const int n = xm.size();
    if (static_cast<int>(ray.size()) != n) throw QuotientError("fibration ray of wrong length");
    FibrationView fv;
    fv.ray = ray;
    for (int i = 0; i < n; ++i)
        if (xm.effective[i] && ray[i] < 0)
            throw QuotientError("fibration ray pairs negatively with a curve");

    std::vector<int> comp_of(n, -1);
    std::vector<std::vector<int>> comps;
    for (int i = 0; i < n; ++i) {
        if (!xm.effective[i] || ray[i] != 0 || comp_of[i] >= 0) continue;
        std::vector<int> stack = {i};
        comp_of[i] = static_cast<int>(comps.size());
        std::vector<int> cc;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            cc.push_back(v);
            for (int u = 0; u < n; ++u)
                if (xm.effective[u] && ray[u] == 0 && comp_of[u] < 0 && xm.gram.at(v, u) > 0) {
                    comp_of[u] = static_cast<int>(comps.size());
                    stack.push_back(u);
                }
        }
        std::sort(cc.begin(), cc.end());
        comps.push_back(std::move(cc));
    }

    dynkin::WeightedGraph graph = xm.graph();
    for (auto& cc : comps) {
        FiberView f;
        f.comps = cc;
        auto type = dynkin::parabolic_type(graph, cc);
        if (!type)
            throw QuotientError("fiber support is not a parabolic diagram; not a fibration ray");

        // Singular points of the fiber: meeting points of its components.
        std::set<int> sing;
        for (std::size_t a = 0; a < cc.size(); ++a)
            for (std::size_t b = a + 1; b < cc.size(); ++b)
                for (const auto& e : xm.entries(cc[a], cc[b])) sing.insert(e.point);
        f.singular_points.assign(sing.begin(), sing.end());

        if (type->family == dynkin::AffineFamily::A) {
            const int k = static_cast<int>(cc.size());
            if (k == 2) {
                // One meeting point: III (tangent or through one point);
                // two distinct points: I2.
                f.type = fib::KodairaFiber{sing.size() == 1 ? fib::FiberSym::III : fib::FiberSym::In,
                                           sing.size() == 1 ? 0 : 2, false};
            } else if (k == 3) {
                // Concurrent triangle: IV; honest triangle: I3.
                f.type = fib::KodairaFiber{sing.size() == 1 ? fib::FiberSym::IV : fib::FiberSym::In,
                                           sing.size() == 1 ? 0 : 3, false};
            } else {
                f.type = fib::KodairaFiber{fib::FiberSym::In, k, false};
            }
        } else if (type->family == dynkin::AffineFamily::D) {
            f.type = fib::KodairaFiber{fib::FiberSym::InStar, type->param - 4, false};
        } else {
            f.type = fib::KodairaFiber{type->param == 6   ? fib::FiberSym::IVStar
                                       : type->param == 7 ? fib::FiberSym::IIIStar
                                                          : fib::FiberSym::IIStar,
                                       0, false};
        }

        std::set<int> canon;
        for (int c : cc)
            for (auto [p, mlt] : xm.canonical_on[c]) canon.insert(p);
        f.canonical.assign(canon.begin(), canon.end());
        fv.fibers.push_back(std::move(f));
    }

    // Bisections pair 1 with the primitive isotropic class (2 with the fiber).
    for (int i = 0; i < n; ++i)
        if (xm.effective[i] && ray[i] == 1) fv.bisections.push_back(i);
    if (fv.bisections.empty()) throw QuotientError("fibration without special bisections");

    // Canonical points on no visible fiber are nodes of invisible I1 fibers.
    std::set<int> on_fibers;
    for (const auto& f : fv.fibers)
        for (int p : f.canonical) on_fibers.insert(p);
    for (int p = 0; p < static_cast<int>(xm.points.size()); ++p)
        if (!on_fibers.count(p)) fv.invisible_nodes.push_back(p);

    // Multiplicity by the bisection-parity rule.
    for (auto& f : fv.fibers) {
        Int v = -1;
        for (int s : fv.bisections) {
            Int acc = 0;
            for (int c : f.comps) acc += xm.gram.at(s, c);
            if (v < 0) v = acc;
            else if (v != acc)
                throw QuotientError("bisections disagree on a fiber multiplicity");
        }
        if (v != 1 && v != 2)
            throw QuotientError("bisection meets a fiber with multiplicity " + v.get_str());
        f.multiple = (v == 1);
        f.type.multiple = f.multiple;
    }
    return fv;
}

FibrationSurvey survey_fibrations(const XModel& xm) {
    FibrationSurvey s;
    s.decomp = dynkin::maximal_decompositions(xm.graph(), 10);
    std::set<std::vector<Int>> seen;
    for (const auto& d : s.decomp.decompositions) {
        if (!seen.insert(d.ray).second) continue;
        FibrationView fv = fibration_view(xm, d.ray);
        s.type_counts[fv.type_string()]++;
        s.views.push_back(std::move(fv));
    }
    return s;
}

std::vector<BisectionProfile> bisection_profiles(const XModel& xm, const FibrationView& view) {
    std::vector<BisectionProfile> out;
    for (int s : view.bisections) {
        BisectionProfile bp;
        bp.bisection = s;
        for (const auto& f : view.fibers) {
            struct Hit {
                int point, mult, comp;
            };
            std::vector<Hit> hits;
            for (int c : f.comps)
                for (const auto& e : xm.entries(s, c)) hits.push_back({e.point, e.mult, c});
            Contact contact;
            for (const auto& h : hits) contact.total_mult += h.mult;

            std::map<int, std::set<int>> comps_at_point;
            for (const auto& h : hits) comps_at_point[h.point].insert(h.comp);
            int shared_point = -1;
            for (auto& [p, cs] : comps_at_point)
                if (cs.size() >= 2) shared_point = p;

            bool is_sing = false;
            if (shared_point >= 0)
                is_sing = std::find(f.singular_points.begin(), f.singular_points.end(),
                                    shared_point) != f.singular_points.end();
            if (shared_point >= 0 && is_sing) {
                contact.kind = ContactKind::SingularPoint;
                contact.point = shared_point;
            } else if (hits.size() == 1 && hits[0].mult == 2 && !xm.is_canonical(hits[0].point)) {
                contact.kind = ContactKind::TangentSimple;
                contact.point = hits[0].point;
            } else if (hits.size() == 1 && hits[0].mult == 1 && xm.is_canonical(hits[0].point)) {
                contact.kind = ContactKind::CanonicalSimple;
                contact.point = hits[0].point;
            } else {
                contact.kind = ContactKind::Other;
                contact.point = hits.empty() ? -1 : hits[0].point;
            }
            bp.per_fiber.push_back(contact);
        }
        for (int p : view.invisible_nodes)
            if (xm.canonical_on[s].count(p)) bp.node_hits.push_back(p);
        out.push_back(std::move(bp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::string xmodel_to_json(const XModel& xm) {
    nlohmann::json j;
    j["kind"] = kind_name(xm.kind);
    nlohmann::json classes = nlohmann::json::array();
    for (int i = 0; i < xm.size(); ++i)
        classes.push_back({{"label", xm.labels[i]},
                           {"effective", static_cast<bool>(xm.effective[i])},
                           {"weight", xm.weight[i]}});
    j["classes"] = classes;
    nlohmann::json gram = nlohmann::json::array();
    for (int i = 0; i < xm.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < xm.size(); ++k) row.push_back(static_cast<long>(xm.gram.at(i, k).get_si()));
        gram.push_back(row);
    }
    j["gram"] = gram;
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t p = 0; p < xm.points.size(); ++p)
        pts.push_back({{"id", p},
                       {"type", xm.points[p].type == CanonicalPoint::Type::A1 ? "A1" : "D4"},
                       {"members", xm.points[p].members}});
    j["points"] = pts;
    j["generic_points"] = xm.generic_points;
    nlohmann::json led = nlohmann::json::array();
    for (const auto& [pair, entries] : xm.ledger) {
        nlohmann::json contribs = nlohmann::json::array();
        for (const auto& e : entries) contribs.push_back({{"point", e.point}, {"mult", e.mult}});
        led.push_back({{"pair", {pair.first, pair.second}}, {"contributions", contribs}});
    }
    j["ledger"] = led;
    return j.dump(2);
}

std::string xmodel_to_dot(const XModel& xm) {
    std::ostringstream os;
    os << "graph xmodel {\n  node [shape=circle];\n";
    for (int i = 0; i < xm.size(); ++i) {
        os << "  v" << i << " [label=\"" << xm.labels[i] << "\"";
        if (!xm.effective[i]) os << " style=dashed";
        os << "];\n";
    }
    for (int i = 0; i < xm.size(); ++i)
        for (int k = i + 1; k < xm.size(); ++k) {
            if (xm.gram.at(i, k) == 0) continue;
            bool tangency = false;
            for (const auto& e : xm.entries(i, k))
                if (e.mult == 2 && !xm.is_canonical(e.point)) tangency = true;
            for (Int m = 0; m < xm.gram.at(i, k); m += tangency ? 2 : 1)
                os << "  v" << i << " -- v" << k << (tangency ? " [penwidth=2]" : "") << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace k3enr::quot
