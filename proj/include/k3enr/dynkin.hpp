#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3enr/intmat.hpp"

namespace k3enr::dynkin {

using exactlat::Int;
using exactlat::IntMat;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Multigraph of (-2)-vectors: edge multiplicity m(i,j) is the pairing.
// At most 64 vertices (bitmask representation).
struct WeightedGraph {
    std::vector<std::string> labels;
    std::vector<char> effective;
    std::vector<std::vector<int>> mult;
    std::vector<uint64_t> adj;  // adjacency masks, built by finalize()

    int size() const { return static_cast<int>(mult.size()); }
    void finalize();  // validates symmetry/diagonal and fills adj
    IntMat gram() const;
    int max_multiplicity() const;
};

WeightedGraph make_graph(std::vector<std::string> labels, std::vector<char> effective,
                         std::vector<std::vector<int>> mult);

enum class AffineFamily { A, D, E };

struct AffineType {
    AffineFamily family;
    int param;  // affine X~_param; rank = param, vertices = param + 1

    int rank() const { return param; }
    int vertices() const { return param + 1; }
    std::string name() const;
    bool operator==(const AffineType& o) const = default;
    bool operator<(const AffineType& o) const {
        return family != o.family ? family < o.family : param < o.param;
    }
};

struct SpectralClass {
    bool semidefinite = false;  // no positive direction
    int corank = 0;             // dimension of the kernel
};

// Exact (rational congruence) classification of the sub-Gram on a vertex set.
SpectralClass spectral_class(const WeightedGraph& g, const std::vector<int>& vs);

// Shape-based affine recognizer; independent of the spectral route.
std::optional<AffineType> structural_affine_type(const WeightedGraph& g,
                                                 const std::vector<int>& vs);

// Affine type iff the sub-Gram is negative semidefinite of corank one.
// Spectral test decides; the structural classifier labels; disagreement is an
// internal error. Input must be connected.
std::optional<AffineType> parabolic_type(const WeightedGraph& g, const std::vector<int>& vs);

struct ConnectedParabolic {
    std::vector<int> vertices;
    AffineType type;
    uint64_t mask = 0;
    uint64_t closure = 0;      // vertices plus their neighbors
    std::vector<Int> kernel;   // positive primitive kernel coefficients (the fiber marks)
    std::vector<Int> ray;      // pairing vector of the kernel class with every vertex
    bool all_effective = false;
    bool any_noneffective = false;
};

// Every connected parabolic subdiagram with at most max_vertices vertices.
// Requires a triple-edge-free graph.
std::vector<ConnectedParabolic> enumerate_parabolics(const WeightedGraph& g, int max_vertices);

struct ParabolicDecomposition {
    std::vector<int> parts;  // indices into the parabolic list
    int total_rank = 0;
    std::vector<Int> ray;
};

struct MaximalDecompositions {
    std::vector<ConnectedParabolic> parabolics;
    std::vector<ParabolicDecomposition> decompositions;  // all of maximal total rank
    int max_rank = 0;
};

// All parabolic decompositions of maximal total rank. Components of a
// decomposition of rank n-1 in a hyperbolic ambient share one isotropic ray,
// so candidates are grouped by the kernel-class ray.
MaximalDecompositions maximal_decompositions(const WeightedGraph& g, int max_vertices);

struct VinbergReport {
    bool nondegenerate = false;
    bool triple_edge_free = false;
    bool verdict = false;
    int ambient_rank = 0;
    int span_rank = 0;
    exactlat::Signature span_signature;
    MaximalDecompositions decomp;
    std::vector<int> completion;  // per parabolic: completing decomposition, or -1
    std::vector<int> failing;     // parabolic indices with no completion
};

// Vinberg's finite-index criterion for a graph of (-2)-vectors in ambient
// signature (1, n): every connected parabolic subdiagram must be a component
// of a parabolic subdiagram of rank n-1.
VinbergReport vinberg_check(const WeightedGraph& g, int n);

struct AutomorphismGroup {
    unsigned long long order = 0;
    std::vector<std::vector<int>> generators;
};

AutomorphismGroup automorphism_count(const WeightedGraph& g, bool respect_flags);

std::optional<std::vector<int>> find_isomorphism(const WeightedGraph& a, const WeightedGraph& b,
                                                 bool respect_flags);

std::string graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const std::string& text);
std::string graph_to_dot(const WeightedGraph& g);

}  // namespace k3enr::dynkin
