#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cvkit/errors.hpp"
#include "cvkit/geo.hpp"

namespace cvkit {

// Symmetric boolean reachability matrix with a forced-true diagonal. The
// true diagonal makes boolean squaring monotone (output covers input), so
// the closure fixpoint always exists. Cells are one byte each, value 0 or 1.
class ConnectivityMatrix {
public:
    // Starts as the identity relation: diagonal true, all else false.
    explicit ConnectivityMatrix(std::size_t n);

    std::size_t size() const { return n_; }

    bool get(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }

    // Sets both (i, j) and (j, i); the relation stays symmetric.
    void set_symmetric(std::size_t i, std::size_t j);

    bool all_true() const;

    bool operator==(const ConnectivityMatrix&) const = default;

    std::span<const std::uint8_t> row(std::size_t i) const {
        return {cells_.data() + i * n_, n_};
    }
    std::span<std::uint8_t> row(std::size_t i) { return {cells_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> cells_;
};

// Vehicle index -> dense partition label, labels issued in first-occurrence
// order (vehicle 0's component is label 0, the next unseen component 1, ...).
struct PartitionAssignment {
    std::vector<int> labels;
    int partition_count = 0;

    bool operator==(const PartitionAssignment&) const = default;
};

struct ClosureTrace {
    int squarings = 0;  // boolean multiplications performed, confirming one included
    bool converged = false;
};

class NonPositiveRange : public Error {
public:
    explicit NonPositiveRange(double range_m);
};

class NotClosed : public Error {
public:
    NotClosed();
};

// Thresholds distances into one-hop reachability: bit(i,j) = d(i,j) <= range_m
// for i != j, diagonal forced true. The boundary is inclusive.
ConnectivityMatrix connectivity_from_distances(const DistanceMatrix& d, double range_m);

// One boolean multiplication of the matrix with itself:
// out(i,j) = OR over k of (c(i,k) AND c(k,j)), computed as an OR of the rows
// that row i links to.
ConnectivityMatrix boolean_square(const ConnectivityMatrix& c);

// Squares until the output equals the input and returns the reflexive-
// transitive closure. An all-true result is its own square, so it ends the
// loop without a confirming multiplication; trace.squarings counts every
// multiplication performed.
std::pair<ConnectivityMatrix, ClosureTrace> multihop_closure(ConnectivityMatrix c);

// Reads connected components off a closed matrix. Verifies the fixpoint
// precondition (squaring must change nothing) and throws NotClosed otherwise.
PartitionAssignment extract_partitions(const ConnectivityMatrix& closed);

// Independent route to the same partitions: disjoint-set union over the
// threshold graph, no boolean algebra involved. Same labeling convention as
// extract_partitions, so results compare with operator== directly.
PartitionAssignment union_find_partitions(const DistanceMatrix& d, double range_m);

}  // namespace cvkit
