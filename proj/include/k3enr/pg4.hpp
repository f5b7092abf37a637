#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3enr::pg4 {

struct PlaneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// F4 = {0, 1, w, w+1} with w^2 = w + 1, encoded as 0..3. Addition is xor.
inline uint8_t f4_add(uint8_t a, uint8_t b) { return a ^ b; }
uint8_t f4_mul(uint8_t a, uint8_t b);
uint8_t f4_inv(uint8_t a);

using HomTriple = std::array<uint8_t, 3>;

// The projective plane over F4: 21 points and 21 lines, both stored as
// normalized homogeneous triples (first nonzero coordinate 1) in
// lexicographic order. A point lies on a line iff the dot product vanishes.
struct Plane {
    std::array<HomTriple, 21> points;
    std::array<HomTriple, 21> lines;
    std::array<uint32_t, 21> line_points;  // bitmask of points on each line
    std::array<uint32_t, 21> point_lines;  // bitmask of lines through each point

    bool incident(int point, int line) const { return (line_points[line] >> point) & 1u; }
    // The unique line through two distinct points.
    int line_through(int p, int q) const { return through_[p][q]; }
    // The unique intersection point of two distinct lines.
    int meet(int l, int m) const { return meet_[l][m]; }

    std::array<std::array<int8_t, 21>, 21> through_;
    std::array<std::array<int8_t, 21>, 21> meet_;
};

Plane build_plane();

// Six points, no three collinear; stored sorted.
using Hyperoval = std::array<int, 6>;

// All 168 hyperovals, sorted, duplicate-free.
std::vector<Hyperoval> hyperovals(const Plane& plane);

// A line ell with its five points in a chosen order and, for i in {1,2},
// the four lines through p_i other than ell.
struct MIIFlag {
    int ell = -1;
    std::array<int, 5> p{};                  // p[0..4] = p1..p5
    std::array<std::array<int, 4>, 2> l{};   // l[i-1][j-1] = line l_ij
};

MIIFlag make_mii_flag(const Plane& plane, int ell, int p1, int p2);
MIIFlag default_mii_flag(const Plane& plane);
void validate_flag(const Plane& plane, const MIIFlag& flag);

// Hyperovals containing p1, p2, avoiding p3, p4, p5, with every line l_ij
// meeting the rest of the set exactly once.
std::vector<Hyperoval> mii_special_hyperovals(const Plane& plane, const MIIFlag& flag);

// Nine points meeting every line in 1 or 3 points, together with the derived
// secant structure: 12 trisecants grouped into 4 triangles whose pairwise
// intersection points (the 12 vertices) complete the 21 points.
struct MIBaseConfig {
    std::array<int, 9> base;
    std::array<int, 12> trisecants;
    std::array<int, 9> tangents;
    std::array<std::array<int, 3>, 4> triangles;  // indices into plane lines
    std::array<int, 12> vertices;
};

std::vector<MIBaseConfig> mi_base_configurations(const Plane& plane);

std::string plane_to_json(const Plane& plane);

}  // namespace k3enr::pg4
