#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "replaylab/transition.hpp"

namespace replaylab {

/// Fixed-capacity FIFO transition store with stable slot identities.
///
/// Slots fill 0..capacity-1 in insertion order and then wrap, so the
/// occupied slots are always exactly [0, len()). Once full, every insert
/// evicts the oldest stored transition; the eviction is reported back to
/// the caller so an external cluster index can stay consistent.
class ReplayBuffer {
public:
    struct Evicted {
        SlotId slot;
        Transition transition;
    };

    struct InsertResult {
        SlotId slot;
        std::optional<Evicted> evicted;
    };

    ReplayBuffer(std::size_t capacity, std::size_t state_dim);

    /// Stores t, overwriting the oldest transition when full.
    InsertResult insert(Transition t);

    /// Returns the transition most recently stored at slot.
    const Transition& get(SlotId slot) const;

    std::size_t len() const { return len_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t state_dim() const { return state_dim_; }

private:
    std::size_t capacity_;
    std::size_t state_dim_;
    std::size_t write_cursor_ = 0;
    std::size_t len_ = 0;
    std::vector<std::optional<Transition>> slots_;
};

} // namespace replaylab
