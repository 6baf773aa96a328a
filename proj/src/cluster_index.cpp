#include "replaylab/cluster_index.hpp"

#include <string>

#include "replaylab/errors.hpp"

namespace replaylab {

void ClusterIndex::insert(SlotId slot, ClusterCode code) {
    if (slot.index >= slots_.size()) {
        slots_.resize(slot.index + 1);
    }
    if (slots_[slot.index].has_value()) {
        throw IndexCorruption("slot " + std::to_string(slot.index) + " is already indexed");
    }
    auto [it, inserted] = members_.try_emplace(code);
    if (inserted || it->second.empty()) {
        nonempty_pos_[code] = nonempty_.size();
        nonempty_.push_back(code);
    }
    slots_[slot.index] = SlotEntry{code, it->second.size()};
    it->second.push_back(slot);
    ++total_;
}

void ClusterIndex::remove(SlotId slot, ClusterCode code) {
    if (slot.index >= slots_.size() || !slots_[slot.index].has_value()) {
        throw IndexCorruption("removing slot " + std::to_string(slot.index) + " which is not indexed");
    }
    const SlotEntry entry = *slots_[slot.index];
    if (entry.code != code) {
        throw IndexCorruption("slot " + std::to_string(slot.index) + " is filed under another cluster");
    }

    auto& list = members_.at(code);
    const SlotId moved = list.back();
    list[entry.pos] = moved;
    slots_[moved.index]->pos = entry.pos;
    list.pop_back();
    slots_[slot.index].reset();
    --total_;

    if (list.empty()) {
        members_.erase(code);
        const std::size_t pos = nonempty_pos_.at(code);
        const ClusterCode last = nonempty_.back();
        nonempty_[pos] = last;
        nonempty_pos_[last] = pos;
        nonempty_.pop_back();
        nonempty_pos_.erase(code);
    }
}

ClusterCode ClusterIndex::cluster_of(SlotId slot) const {
    if (slot.index >= slots_.size() || !slots_[slot.index].has_value()) {
        throw IndexCorruption("slot " + std::to_string(slot.index) + " is not indexed");
    }
    return slots_[slot.index]->code;
}

bool ClusterIndex::contains(SlotId slot) const {
    return slot.index < slots_.size() && slots_[slot.index].has_value();
}

std::size_t ClusterIndex::count(ClusterCode code) const {
    const auto it = members_.find(code);
    return it == members_.end() ? 0 : it->second.size();
}

const std::vector<SlotId>& ClusterIndex::members(ClusterCode code) const {
    const auto it = members_.find(code);
    if (it == members_.end()) {
        throw IndexCorruption("cluster " + std::to_string(code) + " has no members");
    }
    return it->second;
}

std::vector<std::pair<ClusterCode, std::size_t>> ClusterIndex::nonempty_clusters() const {
    std::vector<std::pair<ClusterCode, std::size_t>> out;
    out.reserve(nonempty_.size());
    for (ClusterCode code : nonempty_) {
        out.emplace_back(code, members_.at(code).size());
    }
    return out;
}

void ClusterIndex::clear() {
    slots_.clear();
    members_.clear();
    nonempty_.clear();
    nonempty_pos_.clear();
    total_ = 0;
}

} // namespace replaylab
