#include "replaylab/replay_buffer.hpp"

#include <string>
#include <utility>

#include "replaylab/errors.hpp"

namespace replaylab {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim)
    : capacity_(capacity), state_dim_(state_dim), slots_(capacity) {
    if (capacity == 0) {
        throw ConfigError("replay buffer capacity must be positive");
    }
    if (state_dim == 0) {
        throw ConfigError("replay buffer state_dim must be positive");
    }
}

ReplayBuffer::InsertResult ReplayBuffer::insert(Transition t) {
    if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_) {
        throw RejectedInput("transition dimension " + std::to_string(t.state.size()) + "/" +
                            std::to_string(t.next_state.size()) + " does not match buffer state_dim " +
                            std::to_string(state_dim_));
    }
    if (t.action < 0) {
        throw RejectedInput("transition action must be non-negative");
    }

    const SlotId slot{write_cursor_};
    InsertResult result{slot, std::nullopt};
    if (slots_[slot.index].has_value()) {
        result.evicted = Evicted{slot, std::move(*slots_[slot.index])};
    }
    slots_[slot.index] = std::move(t);
    write_cursor_ = (write_cursor_ + 1) % capacity_;
    if (len_ < capacity_) {
        ++len_;
    }
    return result;
}

const Transition& ReplayBuffer::get(SlotId slot) const {
    if (slot.index >= capacity_ || !slots_[slot.index].has_value()) {
        throw InvalidSlot("slot " + std::to_string(slot.index) + " is not occupied");
    }
    return *slots_[slot.index];
}

} // namespace replaylab
