#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3enr::fib {

struct FibError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FiberSym { In, InStar, II, III, IV, IVStar, IIIStar, IIStar };

struct KodairaFiber {
    FiberSym sym = FiberSym::In;
    int n = 1;              // parameter for In / In*
    bool multiple = false;  // a fiber of type 2F

    int components() const;         // number of irreducible components
    int discriminant() const;       // order of the local component group
    int euler_base() const;         // Euler number without wild contribution
    bool is_multiplicative() const { return sym == FiberSym::In; }
    std::string name() const;       // e.g. "I6", "I1*", "2III"

    static KodairaFiber parse(const std::string& text);
    bool operator==(const KodairaFiber& o) const = default;
};

enum class Ambient { K3, EnriquesClassical, EnriquesSingular, EnriquesSupersingular };

struct FibrationConfig {
    std::vector<KodairaFiber> fibers;
    Ambient ambient = Ambient::K3;

    static FibrationConfig parse(const std::string& fiber_list, const std::string& ambient);
    std::string name() const;
};

struct AuditReport {
    int euler_sum = 0;
    int wild_deficiency = 0;  // c2 minus the sum of base Euler numbers
    int trivial_rank = 0;     // 2 + sum (components - 1)
    int mw_rank = 0;
    std::optional<long long> torsion_order;  // integer sqrt of prod(disc)/|det NS|
};

AuditReport audit_fibration(const FibrationConfig& config);

// The eight elliptic-fibration fiber configurations on the Artin-invariant-1
// supersingular K3 in characteristic 2, with their audits.
std::vector<std::pair<FibrationConfig, AuditReport>> y_catalog_audit();
std::vector<FibrationConfig> y_catalog();

// Rational-double-point pattern contributed by one fiber under the
// inseparable descent.
struct RdpPattern {
    int a1 = 0, d4 = 0, d6 = 0;
    std::string name() const;
    bool operator==(const RdpPattern& o) const = default;
};

struct FiberDescent {
    KodairaFiber x_fiber;              // the image fiber on the Enriques side
    std::vector<RdpPattern> options;   // possible singularity contributions
};

FiberDescent descend_fiber_type(const KodairaFiber& g_fiber);

// Rank-12 sums of 2-elementary root lattices with a >= 8.
struct RootCandidate {
    int a1 = 0, d4 = 0, d6 = 0, d8 = 0, d10 = 0, d12 = 0, e7 = 0, e8 = 0;

    int rank() const { return a1 + 4 * d4 + 6 * d6 + 8 * d8 + 10 * d10 + 12 * d12 + 7 * e7 + 8 * e8; }
    int a() const { return a1 + 2 * (d4 + d6 + d8 + d10 + d12) + e7; }
    std::string name() const;
    bool operator==(const RootCandidate& o) const = default;
};

std::vector<RootCandidate> ehs_root_candidates();

// c2 = deg<D> - K.(D) - (D)^2, the Euler-number formula for a vector field.
bool rs_identity_check(long long c2, long long deg_isolated, long long k_dot_d,
                       long long d_squared);

}  // namespace k3enr::fib
