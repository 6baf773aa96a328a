#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "replaylab/transition.hpp"

namespace replaylab {

using ClusterCode = std::uint64_t;

/// Exact per-cluster membership and counts h(c) for buffered transitions.
///
/// Member lists are contiguous with swap-removal, so insert, remove,
/// cluster_of and a uniform pick within a cluster are all O(1). The set of
/// nonempty clusters is kept explicitly; a cluster whose count drops to
/// zero leaves it immediately. Inconsistent use (double insert, removing a
/// slot that is absent or filed under another code) throws IndexCorruption.
class ClusterIndex {
public:
    void insert(SlotId slot, ClusterCode code);
    void remove(SlotId slot, ClusterCode code);

    ClusterCode cluster_of(SlotId slot) const;
    bool contains(SlotId slot) const;

    /// Count h(c); 0 for a cluster with no members.
    std::size_t count(ClusterCode code) const;
    /// Sum of counts over all clusters; equals the buffer length when the
    /// index is maintained correctly.
    std::size_t total() const { return total_; }
    /// Number of nonempty clusters; the k of the sampling formulas.
    std::size_t nonempty_count() const { return nonempty_.size(); }
    /// Random access into the nonempty-cluster set, i in [0, nonempty_count()).
    ClusterCode nonempty_code_at(std::size_t i) const { return nonempty_[i]; }
    const std::vector<SlotId>& members(ClusterCode code) const;
    std::vector<std::pair<ClusterCode, std::size_t>> nonempty_clusters() const;

    void clear();

private:
    struct SlotEntry {
        ClusterCode code;
        std::size_t pos; // position inside members_[code]
    };

    std::vector<std::optional<SlotEntry>> slots_; // indexed by SlotId::index
    std::unordered_map<ClusterCode, std::vector<SlotId>> members_;
    std::vector<ClusterCode> nonempty_;
    std::unordered_map<ClusterCode, std::size_t> nonempty_pos_;
    std::size_t total_ = 0;
};

} // namespace replaylab
