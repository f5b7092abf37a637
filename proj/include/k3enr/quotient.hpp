#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3enr/dynkin.hpp"
#include "k3enr/fibrations.hpp"
#include "k3enr/nsmodel.hpp"

namespace k3enr::quot {

using exactlat::Int;
using exactlat::IntMat;

struct QuotientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SurfaceKind { MI, VII, MII };
std::string kind_name(SurfaceKind k);
SurfaceKind parse_kind(const std::string& s);

struct CurveRole {
    enum class Kind { FiberComponent, Section, Other } kind = Kind::Other;
    int fiber = -1;         // fiber id for components
    int position = -1;      // position in the fiber's component order
    int multiplicity = 1;   // component multiplicity in the fiber divisor
    int section = -1;       // section id
};

// Configuration of nodal curves on the K3 side: fiber components plus
// (bi)sections, with the full intersection Gram.
struct CurveConfigY {
    std::vector<std::string> labels;
    IntMat gram;
    std::vector<CurveRole> roles;
    std::vector<fib::KodairaFiber> fibers;
    std::vector<std::vector<int>> fiber_components;  // cyclic / star order
    std::vector<int> ns_gen;                         // NS generator index or -1

    int find_label(const std::string& label) const;
    std::vector<Int> fiber_class(int fiber) const;  // multiplicity-weighted sum
    void validate() const;
};

// Fiber components and torsion sections for a K3 elliptic fibration with
// finite Mordell-Weil part given by the cyclic factors of `torsion`.
// Component hits form an injective homomorphism into the product of the
// local component groups; all Neron-Tate heights (chi = 2) vanish and the
// resulting section intersections must be non-negative integers.
CurveConfigY torsion_section_model(const std::vector<fib::KodairaFiber>& fibers,
                                   const std::vector<int>& torsion);

// All solutions (component-hit homomorphisms) rather than just the first.
std::vector<CurveConfigY> torsion_section_model_all(const std::vector<fib::KodairaFiber>& fibers,
                                                    const std::vector<int>& torsion);

CurveConfigY build_y_config(SurfaceKind kind, const pg4::Plane& plane, const ns::NSModel& model);

struct IntegralSet {
    std::vector<int> members;  // curve indices, pairwise disjoint
    int secondary = -1;        // contracted after the chain reaches -1 (MII's L)
};

std::vector<IntegralSet> identify_integral_sets(const CurveConfigY& config, SurfaceKind kind);

struct CanonicalPoint {
    enum class Type { A1, D4 } type = Type::A1;
    std::vector<std::string> members;  // labels of the contracted classes
};

struct LedgerEntry {
    int point = -1;  // canonical id < points.size(), generic otherwise
    int mult = 0;
};

struct XModel {
    SurfaceKind kind = SurfaceKind::MI;
    std::vector<std::string> labels;
    std::vector<char> effective;
    std::vector<int> weight;
    IntMat gram;
    std::vector<CanonicalPoint> points;
    int generic_points = 0;
    std::map<std::pair<int, int>, std::vector<LedgerEntry>> ledger;
    std::vector<std::map<int, int>> canonical_on;  // class -> (canonical point -> multiplicity)
    std::vector<std::pair<std::string, Int>> dropped;  // descended to a non-(-2) class
    std::vector<pg4::Hyperoval> extra_provenance;      // hyperovals behind the extras

    int size() const { return static_cast<int>(labels.size()); }
    bool is_canonical(int point) const { return point < static_cast<int>(points.size()); }
    dynkin::WeightedGraph graph() const;
    int curve_count() const;
    int extra_count() const;
    const std::vector<LedgerEntry>& entries(int a, int b) const;
};

// Inseparable-quotient descent: integral curves and extra classes carry
// weight 1, the rest weight 2; downstairs pairing is w_u w_v <u,v>/2. The
// descended integral curves sit at self-intersection -1 and are contracted,
// as is any class whose self-intersection later reaches -1 (the MII chain).
// Contractions credit the ledger at canonical points; direct K3 crossings
// land at fresh generic points with multiplicity two.
XModel descend(const CurveConfigY& config, const IntegralSet& integral,
               const std::vector<ns::NSClass>& extras, const ns::NSModel* model);

struct BuildOptions {
    int integral_choice = 0;  // which admissible integral set
    int base_choice = 0;      // which MI base configuration
};

XModel build_surface(SurfaceKind kind, const pg4::Plane& plane, const ns::NSModel& model,
                     const BuildOptions& opts = {});

// ---- Fibrations read off a finished model ----

struct FiberView {
    std::vector<int> comps;
    fib::KodairaFiber type;
    std::vector<int> canonical;  // canonical points on the fiber
    bool multiple = false;
    std::vector<int> singular_points;  // points where two components meet
};

struct FibrationView {
    std::vector<Int> ray;  // pairing vector of the primitive isotropic class
    std::vector<FiberView> fibers;
    std::vector<int> invisible_nodes;  // leftover canonical points = I1 fibers
    std::vector<int> bisections;
    std::string type_string() const;
};

FibrationView fibration_view(const XModel& xm, const std::vector<Int>& ray);

// Distinct fibration types over all maximal parabolic decompositions.
struct FibrationSurvey {
    dynkin::MaximalDecompositions decomp;
    std::vector<FibrationView> views;          // one per distinct ray
    std::map<std::string, int> type_counts;    // type string -> number of rays
};

FibrationSurvey survey_fibrations(const XModel& xm);

enum class ContactKind { SingularPoint, TangentSimple, CanonicalSimple, Other };

struct Contact {
    ContactKind kind = ContactKind::Other;
    int point = -1;
    int total_mult = 0;
};

struct BisectionProfile {
    int bisection = -1;
    std::vector<Contact> per_fiber;
    std::vector<int> node_hits;  // invisible-node canonical points on the bisection
};

std::vector<BisectionProfile> bisection_profiles(const XModel& xm, const FibrationView& view);

std::string xmodel_to_json(const XModel& xm);
std::string xmodel_to_dot(const XModel& xm);

}  // namespace k3enr::quot
