#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

using NodeId = std::uint32_t;

/// Ground term node. Literal kinds keep their value in `sym`.
struct Node {
  enum class Kind : std::uint8_t { Const, Int, Bool, Unit, Con, App, Add, Sub, Mul };

  Kind kind = Kind::Const;
  std::string sym;
  std::vector<NodeId> kids;

  bool is_tag() const { return kind == Kind::Int || kind == Kind::Bool || kind == Kind::Unit || kind == Kind::Con; }
};

/// Hash-consed term graph under congruence closure with the theory of
/// constructors: distinct constructors or literals in one class are a
/// contradiction, equal constructors propagate equality to their fields.
class TermGraph {
 public:
  /// Adds `t` bottom-up. Variables found in `bound` denote existing nodes;
  /// any other variable is an opaque constant.
  NodeId add(const Term& t, const std::map<std::string, NodeId>& bound = {});
  /// Returns the node with this signature, creating it if needed.
  NodeId make(Node::Kind kind, std::string sym, std::vector<NodeId> kids = {});

  NodeId find(NodeId n) const;
  void merge(NodeId a, NodeId b);
  bool equal(NodeId a, NodeId b) const { return find(a) == find(b); }

  /// A constructor or literal node in the class of `n`, if any.
  std::optional<NodeId> tag(NodeId n) const;

  bool contradiction() const { return contradiction_; }
  void set_contradiction() { contradiction_ = true; }

  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId n) const { return nodes_[n]; }
  std::vector<NodeId> members(NodeId n) const;

  Term to_term(NodeId n) const;

  /// Number of classes merged so far; changes whenever a merge happens.
  std::size_t merges() const { return merges_; }

 private:
  struct Key {
    Node::Kind kind;
    std::string sym;
    std::vector<NodeId> kids;
    auto operator<=>(const Key&) const = default;
  };

  Key key_of(NodeId n) const;
  void process();
  void unite(NodeId a, NodeId b);

  std::vector<Node> nodes_;
  mutable std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> members_;  // per root
  std::vector<std::vector<NodeId>> uses_;     // per root: nodes with a kid in the class
  std::vector<std::optional<NodeId>> tag_;    // per root
  std::map<Key, NodeId> table_;
  std::vector<std::pair<NodeId, NodeId>> pending_;
  bool contradiction_ = false;
  std::size_t merges_ = 0;
};

}  // namespace eqcheck
