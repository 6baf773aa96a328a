#pragma once

#include <cstddef>
#include <vector>

namespace replaylab {

/// One stored interaction: (state, action, reward, next_state, done).
struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

/// Stable identity of a buffer slot. Remains valid until that slot is
/// evicted, no matter how many unrelated inserts happen in between.
struct SlotId {
    std::size_t index = 0;

    friend bool operator==(const SlotId&, const SlotId&) = default;
    friend bool operator<(const SlotId& a, const SlotId& b) { return a.index < b.index; }
};

} // namespace replaylab
