#include "tml/closure.hpp"

#include <stdexcept>

namespace tml {

SubformulaClosure::SubformulaClosure(const Formula& f) : depth_(modal_depth(f)) {
  auto add = [&](const Formula& g) {
    if (index_.emplace(canonical(g), members_.size()).second) members_.push_back(g);
  };
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    add(g);
    for (std::size_t i = g.num_children(); i-- > 0;) stack.push_back(g.child(i));
  }
  add(Formula::top());
  const std::size_t base = members_.size();
  for (std::size_t i = 0; i < base; ++i)
    if (!members_[i].is(Kind::Not)) add(Formula::neg(members_[i]));

  slices_.resize(static_cast<std::size_t>(depth_) + 1);
  for (int h = 0; h <= depth_; ++h)
    for (const auto& g : members_)
      if (modal_depth(g) <= depth_ - h) slices_[static_cast<std::size_t>(h)].push_back(g);
}

const std::vector<Formula>& SubformulaClosure::slice(int h) const {
  if (h < 0 || h > depth_) throw std::out_of_range("SubformulaClosure::slice");
  return slices_[static_cast<std::size_t>(h)];
}

bool SubformulaClosure::contains(const Formula& g) const { return index_.contains(canonical(g)); }

std::optional<std::size_t> SubformulaClosure::index_of(const Formula& g) const {
  auto it = index_.find(canonical(g));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SubformulaClosure sf_closure(const Formula& f) { return SubformulaClosure(f); }

}  // namespace tml
