#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "udsim/conllu.hpp"

namespace udsim {

// A word tagged with the relation it holds to its head, rendered "form_label".
struct Hypernode {
  int token_index = 0;  // 1-based
  std::string form;
  std::string label;

  std::string render() const { return form + "_" + label; }
  bool operator==(const Hypernode&) const = default;
};

// The group of dependents directed at one head word.
struct Hyperedge {
  Hypernode head;
  std::vector<Hypernode> dependents;

  // "⟨⟨d1_l1, d2_l2⟩, h_l⟩"
  std::string render() const;
  bool operator==(const Hyperedge&) const = default;
};

// Order in which an edge lists its dependents. Similarity is insensitive to
// it; only rendering and iteration order change.
enum class DependentOrder {
  // By token position in the sentence.
  surface,
  // By UD relation group (core arguments, non-core dependents, nominal
  // dependents, then the rest), token position breaking ties.
  relation_taxonomy,
};

// Rank of a deprel's universal part in the relation_taxonomy ordering.
int relation_rank(std::string_view deprel);

// ⟨V, E⟩ with one hyperedge per token; edges()[i].head == nodes()[i].
class Hypergraph {
 public:
  explicit Hypergraph(const DepTree& tree, DependentOrder order = DependentOrder::surface);

  const std::string& sent_id() const { return sent_id_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Hypernode> nodes() const { return nodes_; }
  std::span<const Hyperedge> edges() const { return edges_; }
  const Hyperedge& edge(std::size_t i) const { return edges_.at(i); }
  // 0-based position of the root node.
  std::size_t root() const { return root_; }
  // 0-based positions of the children of node i, ascending.
  std::span<const std::size_t> children(std::size_t i) const { return children_.at(i); }

  // 1 for leaves; otherwise beta plus the maximum height over all children.
  double node_height(std::size_t i, double beta) const;
  double node_height(const Hypernode& node, double beta) const;
  // Heights of every node, index-aligned with nodes().
  std::vector<double> heights(double beta) const;

  std::vector<std::string> render_lines() const;

 private:
  std::string sent_id_;
  std::vector<Hypernode> nodes_;
  std::vector<Hyperedge> edges_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> bottom_up_;  // children before parents
  std::size_t root_ = 0;
};

inline Hypergraph build_hypergraph(const DepTree& tree,
                                   DependentOrder order = DependentOrder::surface) {
  return Hypergraph(tree, order);
}

}  // namespace udsim
