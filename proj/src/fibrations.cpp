#include "k3enr/fibrations.hpp"

#include <cmath>
#include <sstream>

namespace k3enr::fib {

int KodairaFiber::components() const {
    switch (sym) {
        case FiberSym::In: return n;
        case FiberSym::InStar: return n + 5;
        case FiberSym::II: return 1;
        case FiberSym::III: return 2;
        case FiberSym::IV: return 3;
        case FiberSym::IVStar: return 7;
        case FiberSym::IIIStar: return 8;
        case FiberSym::IIStar: return 9;
    }
    return 0;
}

int KodairaFiber::discriminant() const {
    switch (sym) {
        case FiberSym::In: return n;
        case FiberSym::InStar: return 4;
        case FiberSym::II: return 1;
        case FiberSym::III: return 2;
        case FiberSym::IV: return 3;
        case FiberSym::IVStar: return 3;
        case FiberSym::IIIStar: return 2;
        case FiberSym::IIStar: return 1;
    }
    return 0;
}

int KodairaFiber::euler_base() const {
    switch (sym) {
        case FiberSym::In: return n;
        case FiberSym::InStar: return n + 6;
        case FiberSym::II: return 2;
        case FiberSym::III: return 3;
        case FiberSym::IV: return 4;
        case FiberSym::IVStar: return 8;
        case FiberSym::IIIStar: return 9;
        case FiberSym::IIStar: return 10;
    }
    return 0;
}

std::string KodairaFiber::name() const {
    std::string base;
    switch (sym) {
        case FiberSym::In: base = "I" + std::to_string(n); break;
        case FiberSym::InStar: base = "I" + std::to_string(n) + "*"; break;
        case FiberSym::II: base = "II"; break;
        case FiberSym::III: base = "III"; break;
        case FiberSym::IV: base = "IV"; break;
        case FiberSym::IVStar: base = "IV*"; break;
        case FiberSym::IIIStar: base = "III*"; break;
        case FiberSym::IIStar: base = "II*"; break;
    }
    return multiple ? "2" + base : base;
}

KodairaFiber KodairaFiber::parse(const std::string& text) {
    KodairaFiber f;
    std::string s = text;
    if (!s.empty() && s[0] == '2' && s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1]))) {
        f.multiple = true;
        s = s.substr(1);
    }
    bool star = false;
    if (!s.empty() && s.back() == '*') {
        star = true;
        s.pop_back();
    }
    f.n = 0;
    if (s == "II") { f.sym = star ? FiberSym::IIStar : FiberSym::II; return f; }
    if (s == "III") { f.sym = star ? FiberSym::IIIStar : FiberSym::III; return f; }
    if (s == "IV") { f.sym = star ? FiberSym::IVStar : FiberSym::IV; return f; }
    if (!s.empty() && s[0] == 'I') {
        std::string num = s.substr(1);
        if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
            f.sym = star ? FiberSym::InStar : FiberSym::In;
            f.n = std::stoi(num);
            if (f.n < (star ? 0 : 1)) throw FibError("bad fiber parameter in '" + text + "'");
            return f;
        }
    }
    throw FibError("unrecognized Kodaira symbol '" + text + "'");
}

FibrationConfig FibrationConfig::parse(const std::string& fiber_list, const std::string& ambient) {
    FibrationConfig c;
    std::stringstream ss(fiber_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::string trimmed;
        for (char ch : tok)
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (!trimmed.empty()) c.fibers.push_back(KodairaFiber::parse(trimmed));
    }
    if (c.fibers.empty()) throw FibError("empty fiber configuration");
    if (ambient == "k3") c.ambient = Ambient::K3;
    else if (ambient == "enriques" || ambient == "enriques-classical")
        c.ambient = Ambient::EnriquesClassical;
    else if (ambient == "enriques-singular") c.ambient = Ambient::EnriquesSingular;
    else if (ambient == "enriques-supersingular") c.ambient = Ambient::EnriquesSupersingular;
    else throw FibError("unknown ambient '" + ambient + "'");
    return c;
}

std::string FibrationConfig::name() const {
    std::string out = "(";
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        out += fibers[i].name();
        if (i + 1 < fibers.size()) out += ",";
    }
    return out + ")";
}

AuditReport audit_fibration(const FibrationConfig& config) {
    AuditReport rep;
    const int c2 = config.ambient == Ambient::K3 ? 24 : 12;
    bool all_multiplicative = true;
    long long disc_prod = 1;
    for (const KodairaFiber& f : config.fibers) {
        rep.euler_sum += f.euler_base();
        rep.trivial_rank += f.components() - 1;
        disc_prod *= f.discriminant();
        if (!f.is_multiplicative()) all_multiplicative = false;
    }
    rep.trivial_rank += 2;
    rep.wild_deficiency = c2 - rep.euler_sum;
    if (rep.wild_deficiency < 0)
        throw FibError("inconsistent configuration: fiber Euler numbers exceed c2, deficiency " +
                       std::to_string(rep.wild_deficiency));
    if (all_multiplicative && rep.wild_deficiency != 0)
        throw FibError("inconsistent configuration: multiplicative fibers must reach c2 exactly");

    const int picard = config.ambient == Ambient::K3 ? 22 : 10;
    rep.mw_rank = picard - rep.trivial_rank;
    if (rep.mw_rank < 0) throw FibError("trivial lattice exceeds the Picard number");

    // |T|^2 * |det NS| = prod of local discriminants, with |det NS| = 4 for
    // the Artin-invariant-1 K3. Reported whenever the square root is integral.
    if (config.ambient == Ambient::K3 && disc_prod % 4 == 0) {
        long long t2 = disc_prod / 4;
        long long r = std::llround(std::sqrt(static_cast<double>(t2)));
        for (long long c : {r - 1, r, r + 1})
            if (c >= 0 && c * c == t2) rep.torsion_order = c;
    }
    if (rep.mw_rank == 0 && !rep.torsion_order)
        throw FibError("rank-zero fibration without an integral torsion order");
    return rep;
}

std::vector<FibrationConfig> y_catalog() {
    std::vector<std::string> lists = {
        "I6,I6,I6,I6", "I8,I8,I1*", "I10,I10,I2,I2", "I12,I3*",
        "I12,I4,IV*",  "IV*,IV*,IV*", "I16,I1*",     "I18,I2,I2,I2",
    };
    std::vector<FibrationConfig> out;
    for (const auto& l : lists) out.push_back(FibrationConfig::parse(l, "k3"));
    return out;
}

std::vector<std::pair<FibrationConfig, AuditReport>> y_catalog_audit() {
    std::vector<std::pair<FibrationConfig, AuditReport>> out;
    for (const auto& c : y_catalog()) out.push_back({c, audit_fibration(c)});
    return out;
}

std::string RdpPattern::name() const {
    std::string out;
    auto app = [&](int cnt, const std::string& sym) {
        if (!cnt) return;
        if (!out.empty()) out += "+";
        out += cnt == 1 ? sym : std::to_string(cnt) + sym;
    };
    app(a1, "A1");
    app(d4, "D4");
    app(d6, "D6");
    return out.empty() ? "-" : out;
}

FiberDescent descend_fiber_type(const KodairaFiber& g_fiber) {
    FiberDescent d;
    if (g_fiber.sym == FiberSym::In && g_fiber.n >= 2 && g_fiber.n % 2 == 0) {
        d.x_fiber = KodairaFiber{FiberSym::In, g_fiber.n / 2, false};
        d.options = {RdpPattern{g_fiber.n / 2, 0, 0}};
        return d;
    }
    if (g_fiber.sym == FiberSym::InStar && g_fiber.n == 1) {
        d.x_fiber = KodairaFiber{FiberSym::III, 0, false};
        d.options = {RdpPattern{4, 0, 0}, RdpPattern{0, 1, 0}};
        return d;
    }
    if (g_fiber.sym == FiberSym::InStar && g_fiber.n == 3) {
        d.x_fiber = KodairaFiber{FiberSym::III, 0, false};
        d.options = {RdpPattern{2, 1, 0}, RdpPattern{0, 0, 1}};
        return d;
    }
    if (g_fiber.sym == FiberSym::IVStar) {
        d.x_fiber = KodairaFiber{FiberSym::IV, 0, false};
        d.options = {RdpPattern{4, 0, 0}, RdpPattern{0, 1, 0}};
        return d;
    }
    throw FibError("fiber type " + g_fiber.name() + " does not occur in the catalog descent");
}

std::string RootCandidate::name() const {
    std::string out;
    auto app = [&](int cnt, const std::string& sym) {
        if (!cnt) return;
        if (!out.empty()) out += "+";
        out += cnt == 1 ? sym : std::to_string(cnt) + sym;
    };
    app(a1, "A1");
    app(d4, "D4");
    app(d6, "D6");
    app(d8, "D8");
    app(d10, "D10");
    app(d12, "D12");
    app(e7, "E7");
    app(e8, "E8");
    return out;
}

std::vector<RootCandidate> ehs_root_candidates() {
    std::vector<RootCandidate> out;
    for (int e8 = 0; e8 <= 1; ++e8)
        for (int e7 = 0; e7 <= 1; ++e7)
            for (int d12 = 0; d12 <= 1; ++d12)
                for (int d10 = 0; d10 <= 1; ++d10)
                    for (int d8 = 0; d8 <= 1; ++d8)
                        for (int d6 = 0; d6 <= 2; ++d6)
                            for (int d4 = 0; d4 <= 3; ++d4) {
                                RootCandidate c{0, d4, d6, d8, d10, d12, e7, e8};
                                int rest = 12 - c.rank();
                                if (rest < 0) continue;
                                c.a1 = rest;
                                if (c.a() >= 8) out.push_back(c);
                            }
    return out;
}

bool rs_identity_check(long long c2, long long deg_isolated, long long k_dot_d,
                       long long d_squared) {
    return c2 == deg_isolated - k_dot_d - d_squared;
}

}  // namespace k3enr::fib
