#pragma once

#include <string>
#include <vector>

#include "k3enr/lattice.hpp"
#include "k3enr/pg4.hpp"

namespace k3enr::ns {

using exactlat::Int;
using exactlat::IntMat;

struct NSError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A divisor class on Y written over the 42 generators, compared through its
// reduction in the induced rank-22 basis (the generators satisfy 20 relations).
struct NSClass {
    std::vector<Int> raw;      // 42 generator coordinates
    std::vector<Int> reduced;  // 22 induced-basis coordinates

    bool operator==(const NSClass& o) const { return reduced == o.reduced; }
    bool operator<(const NSClass& o) const { return reduced < o.reduced; }
};

// NS(Y) of the Artin-invariant-1 supersingular K3, generated by the 21
// exceptional curves E_p and the 21 line transforms L_l. Generator order:
// E_0..E_20 then L_0..L_20.
struct NSModel {
    pg4::Plane plane;
    std::vector<std::string> labels;    // 42 generator labels
    IntMat gram42;                      // pairings of the generators
    exactlat::GeneratedLattice induced; // rank 22, det -4, signature (1,21)

    static int e_index(int point) { return point; }
    static int l_index(int line) { return 21 + line; }

    NSClass make_class(std::vector<Int> raw) const;
    NSClass generator(int index) const;
    Int pair_raw(const std::vector<Int>& x, const std::vector<Int>& y) const;
    Int pair(const NSClass& x, const NSClass& y) const;
};

NSModel build_ns_model(const pg4::Plane& plane);

// h = 2 L_l + sum of E_p over p on l; independent of the line chosen.
NSClass class_h(const NSModel& model, int line);

// r_S = 2h - sum of E_p over the hyperoval S; a (-4)-class with even pairings.
NSClass minus_four_vector(const NSModel& model, const pg4::Hyperoval& s);

// Keep the classes orthogonal to every named generator ("E<p>" / "L<l>").
std::vector<NSClass> orthogonal_filter(const NSModel& model, const std::vector<NSClass>& classes,
                                       const std::vector<std::string>& curve_labels);

int generator_index(const NSModel& model, const std::string& label);

// All 168 classes, in hyperoval order.
std::vector<NSClass> all_minus_four_vectors(const NSModel& model,
                                            const std::vector<pg4::Hyperoval>& hyps);

std::string ns_to_json(const NSModel& model, const std::vector<pg4::Hyperoval>& hyps);

}  // namespace k3enr::ns
