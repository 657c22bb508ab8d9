// Subformula closure SF(f) with its modal-depth slices.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tml/formula.hpp"

namespace tml {

class SubformulaClosure {
 public:
  explicit SubformulaClosure(const Formula& f);

  const std::vector<Formula>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  int depth() const noexcept { return depth_; }

  /// Members with modal depth <= depth() - h, in closure order.
  const std::vector<Formula>& slice(int h) const;
  bool contains(const Formula& g) const;
  std::optional<std::size_t> index_of(const Formula& g) const;

 private:
  std::vector<Formula> members_;
  std::map<Formula, std::size_t> index_;  // keyed by canonical form
  std::vector<std::vector<Formula>> slices_;
  int depth_ = 0;
};

SubformulaClosure sf_closure(const Formula& f);

}  // namespace tml
