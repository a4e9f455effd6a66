#pragma once

#include <chrono>
#include <cstdint>
#include <limits>

#include "snakes/engine.hpp"

namespace snakes {

// Thrown when a search runs out of its decision budget; callers fall back
// to the best fully completed result.
struct BudgetExhausted {};

struct SearchStats {
  std::uint64_t nodes = 0;       // step expansions (tree searches)
  std::uint64_t iterations = 0;  // MCTS iterations
  int depth_completed = 0;       // deepest fully completed depth
};

// Decision budget for one move. Logical mode counts units (node expansions
// for tree searches, iterations for MCTS) so tests are deterministic; wall
// mode enforces a steady-clock deadline, checked every few charges.
class SearchBudget {
 public:
  static SearchBudget logical(std::uint64_t limit) {
    SearchBudget b;
    b.mode_ = ClockMode::Logical;
    b.limit_ = limit;
    return b;
  }

  static SearchBudget wall(std::chrono::steady_clock::time_point deadline) {
    SearchBudget b;
    b.mode_ = ClockMode::Wall;
    b.deadline_ = deadline;
    return b;
  }

  static SearchBudget wall_from_now_ms(int ms) {
    return wall(std::chrono::steady_clock::now() + std::chrono::milliseconds(ms));
  }

  static SearchBudget unlimited() {
    return logical(std::numeric_limits<std::uint64_t>::max());
  }

  ClockMode mode() const { return mode_; }
  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }

  // Tightens the logical unit cap; wall deadlines are left alone.
  SearchBudget capped(std::uint64_t limit) const {
    SearchBudget b = *this;
    if (b.mode_ == ClockMode::Logical && limit < b.limit_) b.limit_ = limit;
    return b;
  }

  // Consumes one unit. Throws BudgetExhausted once the budget would be
  // exceeded, so the consumed count never passes the limit.
  void charge() {
    if (mode_ == ClockMode::Logical) {
      if (used_ >= limit_) throw BudgetExhausted{};
      ++used_;
      return;
    }
    ++used_;
    if ((used_ & 0xff) == 0 &&
        std::chrono::steady_clock::now() >= deadline_) {
      throw BudgetExhausted{};
    }
  }

  bool exhausted() const {
    if (mode_ == ClockMode::Logical) return used_ >= limit_;
    return std::chrono::steady_clock::now() >= deadline_;
  }

 private:
  ClockMode mode_ = ClockMode::Logical;
  std::chrono::steady_clock::time_point deadline_{};
  std::uint64_t limit_ = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t used_ = 0;
};

}  // namespace snakes
