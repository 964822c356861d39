#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partree/errors.hpp"
#include "partree/posets.hpp"
#include "partree/smith.hpp"

// Set partitions of a finite leaf set under the refinement order with the
// coarse partition at the bottom, the poset P(A) of nontrivial partitions,
// and elementary-chain detection.

namespace partree {

// ---------------------------------------------------------------------------
// Leaf sets
// ---------------------------------------------------------------------------

class LeafSet {
public:
    LeafSet() = default;

    explicit LeafSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.empty()) fail("TooSmall", "leaf set must be nonempty");
        std::set<std::string> seen;
        for (const auto& l : labels_)
            if (!seen.insert(l).second) fail("DuplicateLabel", "leaf '" + l + "'");
    }

    // a, b, c, ... (n <= 26)
    static LeafSet alphabet(int n) {
        if (n < 1 || n > 26) fail("TooLarge", "alphabet leaf sets support 1..26 leaves");
        std::vector<std::string> labels;
        for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
        return LeafSet(std::move(labels));
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    int index(const std::string& label) const {
        for (int i = 0; i < size(); ++i)
            if (labels_[i] == label) return i;
        return -1;
    }

    bool operator==(const LeafSet& o) const { return labels_ == o.labels_; }

private:
    std::vector<std::string> labels_;
};

inline std::string block_to_string(const LeafSet& a, const std::vector<int>& block) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (i) os << ',';
        os << a.label(block[i]);
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

class Partition {
public:
    // Canonical form: each block sorted, blocks sorted by least element.
    static Partition from_blocks(int leaf_count, std::vector<std::vector<int>> blocks) {
        Partition p;
        p.leaf_count_ = leaf_count;
        std::vector<bool> seen(leaf_count, false);
        for (auto& b : blocks) {
            if (b.empty()) fail("EmptyBlock", "partition block is empty");
            std::sort(b.begin(), b.end());
            for (int x : b) {
                if (x < 0 || x >= leaf_count) fail("ElementNotFound", "leaf index out of range");
                if (seen[x]) fail("NotDisjoint", "leaf appears in two blocks");
                seen[x] = true;
            }
        }
        for (int i = 0; i < leaf_count; ++i)
            if (!seen[i]) fail("NotACover", "leaf " + std::to_string(i) + " uncovered");
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& x, const auto& y) { return x[0] < y[0]; });
        p.blocks_ = std::move(blocks);
        return p;
    }

    static Partition from_labels(const LeafSet& a, const std::vector<std::vector<std::string>>& blocks) {
        std::vector<std::vector<int>> idx;
        for (const auto& b : blocks) {
            std::vector<int> ib;
            for (const auto& l : b) {
                int i = a.index(l);
                if (i < 0) fail("ElementNotFound", "leaf '" + l + "' not in the leaf set");
                ib.push_back(i);
            }
            idx.push_back(std::move(ib));
        }
        return from_blocks(a.size(), std::move(idx));
    }

    static Partition indiscrete(int leaf_count) {
        std::vector<int> all(leaf_count);
        std::iota(all.begin(), all.end(), 0);
        return from_blocks(leaf_count, {all});
    }

    static Partition discrete(int leaf_count) {
        std::vector<std::vector<int>> blocks;
        for (int i = 0; i < leaf_count; ++i) blocks.push_back({i});
        return from_blocks(leaf_count, std::move(blocks));
    }

    int leaf_count() const { return leaf_count_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    bool is_indiscrete() const { return block_count() == 1; }
    bool is_discrete() const { return block_count() == leaf_count_; }
    bool is_nontrivial() const { return !is_indiscrete() && !is_discrete(); }

    // Index of the block containing each leaf.
    std::vector<int> block_of_leaf() const {
        std::vector<int> out(leaf_count_, -1);
        for (int b = 0; b < block_count(); ++b)
            for (int x : blocks_[b]) out[x] = b;
        return out;
    }

    // Restricted growth string over the canonical leaf order: a compact
    // canonical key (blocks numbered by first appearance).
    std::vector<int> rgs() const {
        std::vector<int> of = block_of_leaf();
        std::vector<int> renumber(block_count(), -1);
        int next = 0;
        std::vector<int> out(leaf_count_);
        for (int i = 0; i < leaf_count_; ++i) {
            if (renumber[of[i]] < 0) renumber[of[i]] = next++;
            out[i] = renumber[of[i]];
        }
        return out;
    }

    std::vector<std::vector<int>> nonsingleton_blocks() const {
        std::vector<std::vector<int>> out;
        for (const auto& b : blocks_)
            if (b.size() >= 2) out.push_back(b);
        return out;
    }

    std::string to_string(const LeafSet& a) const {
        std::ostringstream os;
        for (const auto& b : blocks_) os << block_to_string(a, b);
        return os.str();
    }

    bool operator==(const Partition& o) const {
        return leaf_count_ == o.leaf_count_ && blocks_ == o.blocks_;
    }
    bool operator<(const Partition& o) const {
        return std::tie(leaf_count_, blocks_) < std::tie(o.leaf_count_, o.blocks_);
    }

private:
    int leaf_count_ = 0;
    std::vector<std::vector<int>> blocks_;
};

// coarse <= fine: true iff every block of `fine` is contained in a block of
// `coarse`.
inline bool partition_leq(const Partition& coarse, const Partition& fine) {
    if (coarse.leaf_count() != fine.leaf_count())
        fail("LeafSetMismatch", "partitions of different leaf sets are incomparable");
    std::vector<int> of = coarse.block_of_leaf();
    for (const auto& b : fine.blocks()) {
        const int target = of[b[0]];
        for (int x : b)
            if (of[x] != target) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

// All set partitions of A in restricted-growth-string lexicographic order;
// optionally without the indiscrete and discrete ones.
inline std::vector<Partition> all_partitions(const LeafSet& a, bool nontrivial_only) {
    const int n = a.size();
    std::vector<Partition> out;
    std::vector<int> rgs(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int max_used) {
        if (pos == n) {
            const int k = max_used + 1;
            std::vector<std::vector<int>> blocks(k);
            for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
            Partition p = Partition::from_blocks(n, std::move(blocks));
            if (!nontrivial_only || p.is_nontrivial()) out.push_back(std::move(p));
            return;
        }
        for (int b = 0; b <= max_used + 1; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(max_used, b));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
    return out;
}

// Bell numbers via the triangle recurrence; the independent counting oracle
// for the enumerator above.
inline smith::Int bell_number(int n) {
    if (n < 0) fail("TooSmall", "Bell number of negative index");
    std::vector<smith::Int> row = {1};
    for (int i = 1; i <= n; ++i) {
        std::vector<smith::Int> next;
        next.reserve(i + 1);
        next.push_back(row.back());
        for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(i + 1); ++j)
            next.push_back(next[j] + row[j]);
        row = std::move(next);
    }
    return row[0];
}

// The poset P(A) of nontrivial partitions, coarse below fine.
inline Poset partition_poset(const LeafSet& a) {
    if (a.size() < 2) fail("TooSmall", "partition poset needs at least two leaves");
    std::vector<Partition> parts = all_partitions(a, true);
    std::vector<std::string> labels;
    labels.reserve(parts.size());
    for (const auto& p : parts) labels.push_back(p.to_string(a));
    const int n = static_cast<int>(parts.size());
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) leq[i][j] = partition_leq(parts[i], parts[j]);
    // partition_leq(p, p) is true, and the relation is transitive by
    // containment of blocks; from_leq_matrix re-validates all axioms.
    return Poset::from_leq_matrix(std::move(labels), std::move(leq));
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

// A strictly increasing chain of nontrivial partitions: a nondegenerate
// simplex of the partition complex NP(A).
class Chain {
public:
    static Chain build(std::vector<Partition> elems) {
        Chain c;
        if (elems.empty()) fail("EmptyChain", "a chain holds at least one partition");
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (!elems[i].is_nontrivial())
                fail("TrivialPartition", "chain entry " + std::to_string(i) + " is trivial");
            if (i > 0) {
                if (!partition_leq(elems[i - 1], elems[i]) || elems[i - 1] == elems[i])
                    fail("NotStrict", "chain is not strictly increasing at position " +
                                          std::to_string(i));
            }
        }
        c.elems_ = std::move(elems);
        return c;
    }

    const std::vector<Partition>& elems() const { return elems_; }
    int length() const { return static_cast<int>(elems_.size()) - 1; }  // simplex dimension
    const Partition& top() const { return elems_.back(); }
    const Partition& bottom() const { return elems_.front(); }

    std::string to_string(const LeafSet& a) const {
        std::ostringstream os;
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (i) os << " < ";
            os << elems_[i].to_string(a);
        }
        return os.str();
    }

private:
    std::vector<Partition> elems_;
};

// True iff every step refines exactly one block and the top partition has
// exactly one block of size >= 2: one non-unary vertex per layer of the
// layered tree.
inline bool is_elementary(const Chain& c) {
    const auto& elems = c.elems();
    for (std::size_t i = 0; i + 1 < elems.size(); ++i) {
        const std::vector<int> of = elems[i].block_of_leaf();
        std::set<int> refined;
        for (const auto& b : elems[i + 1].blocks())
            if (static_cast<int>(b.size()) < static_cast<int>(elems[i].blocks()[of[b[0]]].size()))
                refined.insert(of[b[0]]);
        if (refined.size() != 1) return false;
    }
    return elems.back().nonsingleton_blocks().size() == 1;
}

}  // namespace partree
