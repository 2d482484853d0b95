#include "udsim/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string_view>

namespace udsim {

std::string Hyperedge::render() const {
  std::string out = "⟨⟨";
  for (std::size_t k = 0; k < dependents.size(); ++k) {
    if (k) out += ", ";
    out += dependents[k].render();
  }
  out += "⟩, " + head.render() + "⟩";
  return out;
}

int relation_rank(std::string_view deprel) {
  // Row-major reading of the UD relation table, followed by the relations
  // that sit outside it.
  static constexpr std::array<std::string_view, 37> kOrder = {
      "nsubj", "obj", "iobj", "csubj", "ccomp", "xcomp",                           // core
      "obl", "vocative", "expl", "dislocated", "advcl", "advmod", "discourse",      // non-core
      "aux", "cop", "mark",                                                        //
      "nmod", "appos", "nummod", "acl", "amod", "det", "clf", "case",              // nominal
      "conj", "cc", "fixed", "flat", "compound", "list", "parataxis", "orphan",     // other
      "goeswith", "reparandum", "punct", "root", "dep"};
  auto base = deprel.substr(0, deprel.find(':'));
  auto it = std::find(kOrder.begin(), kOrder.end(), base);
  return static_cast<int>(it - kOrder.begin());
}

Hypergraph::Hypergraph(const DepTree& tree, DependentOrder order) : sent_id_(tree.sent_id()) {
  const auto n = tree.size();
  nodes_.reserve(n);
  for (const Token& t : tree.tokens()) nodes_.push_back({t.id, t.form, t.deprel});

  children_.resize(n);
  edges_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c : tree.children(static_cast<int>(i + 1)))
      children_[i].push_back(static_cast<std::size_t>(c - 1));
    Hyperedge e{nodes_[i], {}};
    for (auto c : children_[i]) e.dependents.push_back(nodes_[c]);
    if (order == DependentOrder::relation_taxonomy)
      std::stable_sort(e.dependents.begin(), e.dependents.end(),
                       [](const Hypernode& a, const Hypernode& b) {
                         return relation_rank(a.label) < relation_rank(b.label);
                       });
    edges_.push_back(std::move(e));
  }
  root_ = static_cast<std::size_t>(tree.root_id() - 1);

  // Breadth-first from the root, reversed, puts children ahead of parents.
  bottom_up_.reserve(n);
  bottom_up_.push_back(root_);
  for (std::size_t k = 0; k < bottom_up_.size(); ++k)
    for (auto c : children_[bottom_up_[k]]) bottom_up_.push_back(c);
  std::reverse(bottom_up_.begin(), bottom_up_.end());
}

std::vector<double> Hypergraph::heights(double beta) const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  std::vector<double> h(size(), 1.0);
  for (auto i : bottom_up_) {
    if (children_[i].empty()) continue;
    double best = 0.0;
    for (auto c : children_[i]) best = std::max(best, h[c]);
    h[i] = best + beta;
  }
  return h;
}

double Hypergraph::node_height(std::size_t i, double beta) const {
  if (i >= size()) throw std::out_of_range("node index out of range");
  return heights(beta)[i];
}

double Hypergraph::node_height(const Hypernode& node, double beta) const {
  auto i = static_cast<std::size_t>(node.token_index - 1);
  if (node.token_index < 1 || i >= size() || nodes_[i] != node)
    throw std::invalid_argument("node does not belong to this hypergraph");
  return heights(beta)[i];
}

std::vector<std::string> Hypergraph::render_lines() const {
  std::vector<std::string> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.render());
  return out;
}

}  // namespace udsim
