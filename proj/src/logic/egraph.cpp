#include "eqcheck/logic/egraph.hpp"

#include <stdexcept>

namespace eqcheck {

NodeId TermGraph::add(const Term& t, const std::map<std::string, NodeId>& bound) {
  switch (t.kind) {
    case TermKind::Var: {
      auto it = bound.find(t.name);
      if (it != bound.end()) return it->second;
      return make(Node::Kind::Const, t.name);
    }
    case TermKind::IntLit:
      return make(Node::Kind::Int, t.value.str());
    case TermKind::BoolLit:
      return make(Node::Kind::Bool, t.flag ? "true" : "false");
    case TermKind::UnitLit:
      return make(Node::Kind::Unit, "()");
    case TermKind::Con:
    case TermKind::App: {
      std::vector<NodeId> kids;
      for (const auto& a : t.args) kids.push_back(add(a, bound));
      return make(t.kind == TermKind::Con ? Node::Kind::Con : Node::Kind::App, t.name, std::move(kids));
    }
    case TermKind::PrimOp: {
      NodeId a = add(t.args[0], bound);
      NodeId b = add(t.args[1], bound);
      Node::Kind k = t.op == PrimOpKind::Add ? Node::Kind::Add : t.op == PrimOpKind::Sub ? Node::Kind::Sub : Node::Kind::Mul;
      return make(k, "", {a, b});
    }
    case TermKind::ListLit:
    case TermKind::ConsSugar:
      break;
  }
  throw std::logic_error("term graph given list sugar");
}

NodeId TermGraph::make(Node::Kind kind, std::string sym, std::vector<NodeId> kids) {
  Key k{kind, sym, kids};
  for (auto& c : k.kids) c = find(c);
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;

  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{kind, std::move(sym), std::move(kids)});
  parent_.push_back(id);
  members_.push_back({id});
  uses_.emplace_back();
  tag_.push_back(nodes_[id].is_tag() ? std::optional<NodeId>(id) : std::nullopt);
  table_.emplace(std::move(k), id);
  for (NodeId c : nodes_[id].kids) uses_[find(c)].push_back(id);
  return id;
}

NodeId TermGraph::find(NodeId n) const {
  while (parent_[n] != n) {
    parent_[n] = parent_[parent_[n]];
    n = parent_[n];
  }
  return n;
}

std::optional<NodeId> TermGraph::tag(NodeId n) const { return tag_[find(n)]; }

std::vector<NodeId> TermGraph::members(NodeId n) const { return members_[find(n)]; }

TermGraph::Key TermGraph::key_of(NodeId n) const {
  const Node& nd = nodes_[n];
  Key k{nd.kind, nd.sym, nd.kids};
  for (auto& c : k.kids) c = find(c);
  return k;
}

void TermGraph::merge(NodeId a, NodeId b) {
  pending_.emplace_back(a, b);
  process();
}

void TermGraph::process() {
  while (!pending_.empty()) {
    auto [a, b] = pending_.back();
    pending_.pop_back();
    unite(a, b);
  }
}

void TermGraph::unite(NodeId a, NodeId b) {
  NodeId ra = find(a), rb = find(b);
  if (ra == rb) return;
  if (members_[ra].size() > members_[rb].size()) std::swap(ra, rb);
  ++merges_;

  auto ta = tag_[ra], tb = tag_[rb];
  parent_[ra] = rb;
  members_[rb].insert(members_[rb].end(), members_[ra].begin(), members_[ra].end());
  members_[ra].clear();

  if (ta && tb) {
    const Node& x = nodes_[*ta];
    const Node& y = nodes_[*tb];
    if (x.kind != y.kind || x.sym != y.sym || x.kids.size() != y.kids.size()) {
      contradiction_ = true;
    } else {
      for (std::size_t i = 0; i < x.kids.size(); ++i) pending_.emplace_back(x.kids[i], y.kids[i]);
    }
  } else if (ta) {
    tag_[rb] = ta;
  }

  auto moved = std::move(uses_[ra]);
  uses_[ra].clear();
  for (NodeId p : moved) {
    Key k = key_of(p);
    auto it = table_.find(k);
    if (it != table_.end() && it->second != p && key_of(it->second) == k) {
      if (find(it->second) != find(p)) pending_.emplace_back(it->second, p);
    } else {
      table_[k] = p;
    }
    uses_[rb].push_back(p);
  }
}

Term TermGraph::to_term(NodeId n) const {
  const Node& nd = nodes_[n];
  switch (nd.kind) {
    case Node::Kind::Const:
      return Term::var(nd.sym);
    case Node::Kind::Int:
      return Term::int_lit(Integer(nd.sym));
    case Node::Kind::Bool:
      return Term::bool_lit(nd.sym == "true");
    case Node::Kind::Unit:
      return Term::unit();
    case Node::Kind::Con:
    case Node::Kind::App: {
      std::vector<Term> args;
      for (NodeId k : nd.kids) args.push_back(to_term(k));
      return nd.kind == Node::Kind::Con ? Term::con(nd.sym, std::move(args)) : Term::app(nd.sym, std::move(args));
    }
    case Node::Kind::Add:
    case Node::Kind::Sub:
    case Node::Kind::Mul:
      break;
  }
  PrimOpKind op = nd.kind == Node::Kind::Add ? PrimOpKind::Add : nd.kind == Node::Kind::Sub ? PrimOpKind::Sub : PrimOpKind::Mul;
  return Term::prim(op, to_term(nd.kids[0]), to_term(nd.kids[1]));
}

}  // namespace eqcheck
