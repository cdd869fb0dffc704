#include "cvkit/partition.hpp"

#include <numeric>
#include <string>

namespace cvkit {

NonPositiveRange::NonPositiveRange(double range_m)
    : Error("communication range must be positive, got " + std::to_string(range_m)) {}

NotClosed::NotClosed()
    : Error("matrix is not a closure fixpoint: squaring it changes it") {}

ConnectivityMatrix::ConnectivityMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {
    for (std::size_t i = 0; i < n_; ++i) cells_[i * n_ + i] = 1;
}

void ConnectivityMatrix::set_symmetric(std::size_t i, std::size_t j) {
    cells_[i * n_ + j] = 1;
    cells_[j * n_ + i] = 1;
}

bool ConnectivityMatrix::all_true() const {
    for (const std::uint8_t cell : cells_) {
        if (cell == 0) return false;
    }
    return true;
}

ConnectivityMatrix connectivity_from_distances(const DistanceMatrix& d, double range_m) {
    if (!(range_m > 0.0)) throw NonPositiveRange(range_m);
    const std::size_t n = d.size();
    ConnectivityMatrix c(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d.at(i, j) <= range_m) c.set_symmetric(i, j);
        }
    }
    return c;
}

ConnectivityMatrix boolean_square(const ConnectivityMatrix& c) {
    const std::size_t n = c.size();
    ConnectivityMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto out_row = out.row(i);
        auto in_row = c.row(i);
        // Row i of the product is the OR of every row k that row i links to.
        // The true diagonal makes k = i one of them, so out covers c.
        for (std::size_t k = 0; k < n; ++k) {
            if (in_row[k] == 0) continue;
            auto k_row = c.row(k);
            for (std::size_t j = 0; j < n; ++j) out_row[j] |= k_row[j];
        }
    }
    return out;
}

std::pair<ConnectivityMatrix, ClosureTrace> multihop_closure(ConnectivityMatrix c) {
    ClosureTrace trace;
    for (;;) {
        ConnectivityMatrix next = boolean_square(c);
        ++trace.squarings;
        // Fixpoint test per the flowchart; a fully-true matrix is its own
        // square, so it needs no confirming multiplication.
        if (next == c || next.all_true()) {
            trace.converged = true;
            return {std::move(next), trace};
        }
        c = std::move(next);
    }
}

PartitionAssignment extract_partitions(const ConnectivityMatrix& closed) {
    if (!closed.all_true() && boolean_square(closed) != closed) {
        throw NotClosed();
    }
    const std::size_t n = closed.size();
    PartitionAssignment out;
    out.labels.assign(n, -1);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] >= 0) continue;
        // Row i of an equivalence relation lists exactly i's component.
        for (std::size_t j = i; j < n; ++j) {
            if (closed.get(i, j)) out.labels[j] = next_label;
        }
        ++next_label;
    }
    out.partition_count = next_label;
    return out;
}

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];  // path halving
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

PartitionAssignment union_find_partitions(const DistanceMatrix& d, double range_m) {
    if (!(range_m > 0.0)) throw NonPositiveRange(range_m);
    const std::size_t n = d.size();
    DisjointSet dsu(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d.at(i, j) <= range_m) dsu.unite(i, j);
        }
    }

    PartitionAssignment out;
    out.labels.assign(n, -1);
    std::vector<int> root_label(n, -1);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = dsu.find(i);
        if (root_label[root] < 0) root_label[root] = next_label++;
        out.labels[i] = root_label[root];
    }
    out.partition_count = next_label;
    return out;
}

}  // namespace cvkit
