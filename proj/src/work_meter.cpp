#include "hpwe/work_meter.hpp"

namespace hpwe {

void WorkMeter::charge(std::uint64_t ops) {
  std::lock_guard lock(mu_);
  phases_[phase_] += ops;
  total_.fetch_add(ops, std::memory_order_relaxed);
}

void WorkMeter::charge(std::string_view phase, std::uint64_t ops) {
  std::lock_guard lock(mu_);
  auto it = phases_.find(phase);
  if (it == phases_.end()) it = phases_.emplace(std::string(phase), 0).first;
  it->second += ops;
  total_.fetch_add(ops, std::memory_order_relaxed);
}

void WorkMeter::add_rounds(std::uint64_t rounds) {
  rounds_.fetch_add(rounds, std::memory_order_relaxed);
}

WorkMeter::Breakdown WorkMeter::phase_breakdown() const {
  std::lock_guard lock(mu_);
  return phases_;
}

std::string WorkMeter::current_phase() const {
  std::lock_guard lock(mu_);
  return phase_;
}

void WorkMeter::reset() {
  std::lock_guard lock(mu_);
  phases_.clear();
  total_.store(0, std::memory_order_relaxed);
  rounds_.store(0, std::memory_order_relaxed);
}

WorkMeter::Scope::Scope(WorkMeter* meter, std::string_view phase) : meter_(meter) {
  if (meter_ == nullptr) return;
  std::lock_guard lock(meter_->mu_);
  previous_ = std::exchange(meter_->phase_, std::string(phase));
}

WorkMeter::Scope::~Scope() {
  if (meter_ == nullptr) return;
  std::lock_guard lock(meter_->mu_);
  meter_->phase_ = std::move(previous_);
}

}  // namespace hpwe
