#pragma once

// Abstract work and round counters.
//
// Work is charged as one unit per element touched per bulk phase, never per
// machine instruction, so totals are comparable across compilers and hosts.
// Rounds count barrier-separated bulk phases and stand in for depth.

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace hpwe {

class WorkMeter {
 public:
  using Breakdown = std::map<std::string, std::uint64_t, std::less<>>;

  WorkMeter() = default;
  WorkMeter(const WorkMeter&) = delete;
  WorkMeter& operator=(const WorkMeter&) = delete;

  // Charges `ops` to the current phase label.
  void charge(std::uint64_t ops);
  void charge(std::string_view phase, std::uint64_t ops);
  void add_rounds(std::uint64_t rounds = 1);

  std::uint64_t total_ops() const { return total_.load(std::memory_order_relaxed); }
  std::uint64_t rounds() const { return rounds_.load(std::memory_order_relaxed); }
  Breakdown phase_breakdown() const;
  std::string current_phase() const;

  void reset();

  // Sets the phase label for the lifetime of the scope and restores the
  // previous label afterwards. A null meter makes this a no-op.
  class Scope {
   public:
    Scope(WorkMeter* meter, std::string_view phase);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    WorkMeter* meter_;
    std::string previous_;
  };

 private:
  mutable std::mutex mu_;
  std::atomic<std::uint64_t> total_{0};
  std::atomic<std::uint64_t> rounds_{0};
  Breakdown phases_;
  std::string phase_ = "default";
};

inline void charge(WorkMeter* meter, std::uint64_t ops) {
  if (meter != nullptr) meter->charge(ops);
}

inline void charge(WorkMeter* meter, std::string_view phase, std::uint64_t ops) {
  if (meter != nullptr) meter->charge(phase, ops);
}

inline void add_rounds(WorkMeter* meter, std::uint64_t rounds = 1) {
  if (meter != nullptr) meter->add_rounds(rounds);
}

}  // namespace hpwe
