#include "eqcheck/semantics/eval.hpp"

#include <pthread.h>

#include <limits>
#include <new>

namespace eqcheck {
namespace detail {

struct Code {
  enum class Op : std::uint8_t { Slot, Lit, Con, Call, Add, Sub, Mul, Chain };
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  Op op = Op::Lit;
  std::uint32_t index = 0;  // slot, function id, or the chain part that is the result
  const ConstructorInfo* con = nullptr;
  Value lit;
  std::vector<Code> args;
};

struct CPat {
  PatternKind kind = PatternKind::Wild;
  std::uint32_t slot = 0;
  const ConstructorInfo* con = nullptr;
  Value lit;
  std::vector<CPat> args;
};

struct CClause {
  std::vector<CPat> pats;
  Code body;
};

struct Fn {
  std::string name;
  std::size_t arity = 0;
  std::uint32_t frame = 0;
  std::vector<CClause> clauses;
};

struct Program {
  std::vector<Fn> fns;
  std::map<std::string, std::uint32_t> ids;
};

namespace {

class Compiler {
 public:
  Compiler(const TypeEnv& env, const Program& prog) : env_(env), prog_(prog) {}

  std::uint32_t slot_for(const std::string& name) {
    auto [it, fresh] = slots_.emplace(name, next_);
    if (fresh) ++next_;
    return it->second;
  }

  std::uint32_t frame_size() const { return next_; }

  CPat pattern(const Pattern& p) {
    CPat out;
    out.kind = p.kind;
    switch (p.kind) {
      case PatternKind::Var:
        out.slot = slot_for(p.name);
        break;
      case PatternKind::Wild:
        break;
      case PatternKind::Int:
        out.lit = Value::integer(p.value);
        break;
      case PatternKind::Bool:
        out.lit = Value::boolean(p.flag);
        break;
      case PatternKind::Con:
        out.con = env_.constructor(p.name);
        for (const auto& a : p.args) out.args.push_back(pattern(a));
        break;
    }
    return out;
  }

  Code term(const Term& t) {
    Code c;
    switch (t.kind) {
      case TermKind::Var: {
        auto it = slots_.find(t.name);
        if (it == slots_.end()) throw std::logic_error("unbound variable '" + t.name + "' at evaluation");
        c.op = Code::Op::Slot;
        c.index = it->second;
        return c;
      }
      case TermKind::IntLit:
        c.lit = Value::integer(t.value);
        return c;
      case TermKind::BoolLit:
        c.lit = Value::boolean(t.flag);
        return c;
      case TermKind::UnitLit:
        c.lit = Value::unit();
        return c;
      case TermKind::Con:
        c.op = Code::Op::Con;
        c.con = env_.constructor(t.name);
        if (!c.con) throw std::logic_error("unknown constructor '" + t.name + "'");
        break;
      case TermKind::App: {
        c.op = Code::Op::Call;
        auto it = prog_.ids.find(t.name);
        if (it == prog_.ids.end()) throw std::logic_error("unknown function '" + t.name + "'");
        c.index = it->second;
        break;
      }
      case TermKind::PrimOp:
        c.op = t.op == PrimOpKind::Add ? Code::Op::Add : t.op == PrimOpKind::Sub ? Code::Op::Sub : Code::Op::Mul;
        break;
      case TermKind::ListLit:
      case TermKind::ConsSugar:
        throw std::logic_error("list sugar reached the evaluator");
    }
    for (const auto& a : t.args) c.args.push_back(term(a));
    return c;
  }

  Code body(const Body& b) {
    if (const auto* t = std::get_if<Term>(&b)) return term(*t);
    const auto& chain = std::get<ProofChain>(b);
    Code c;
    c.op = Code::Op::Chain;
    c.args.push_back(term(chain.head));
    c.index = 0;
    for (const auto& s : chain.steps) {
      c.index = static_cast<std::uint32_t>(c.args.size());
      c.args.push_back(term(s.rhs));
      for (const auto& h : s.hints) c.args.push_back(term(h));
    }
    if (chain.qed) c.index = Code::kNone;
    return c;
  }

 private:
  const TypeEnv& env_;
  const Program& prog_;
  std::map<std::string, std::uint32_t> slots_;
  std::uint32_t next_ = 0;
};

// Argument buffer that stays on the C++ stack for small arities.
class ArgBuf {
 public:
  explicit ArgBuf(std::size_t n)
      : n_(n), p_(n <= kInline ? reinterpret_cast<Value*>(raw_)
                               : static_cast<Value*>(::operator new(n * sizeof(Value)))) {
    for (std::size_t i = 0; i < n; ++i) new (&p_[i]) Value();
  }
  ~ArgBuf() {
    for (std::size_t i = 0; i < n_; ++i) p_[i].~Value();
    if (n_ > kInline) ::operator delete(p_);
  }
  ArgBuf(const ArgBuf&) = delete;
  ArgBuf& operator=(const ArgBuf&) = delete;

  Value* data() { return p_; }
  std::size_t size() const { return n_; }

 private:
  static constexpr std::size_t kInline = 8;
  std::size_t n_;
  Value* p_;
  alignas(Value) unsigned char raw_[kInline * sizeof(Value)];
};

}  // namespace
}  // namespace detail

using detail::Code;
using detail::CPat;

namespace {

// Lowest usable address of the current thread's stack, plus a safety margin.
const char* stack_floor() {
  thread_local const char* floor = [] {
    pthread_attr_t attr;
    void* addr = nullptr;
    std::size_t size = 0;
    if (pthread_getattr_np(pthread_self(), &attr) == 0) {
      pthread_attr_getstack(&attr, &addr, &size);
      pthread_attr_destroy(&attr);
    }
    return addr ? static_cast<const char*>(addr) + 256 * 1024 : nullptr;
  }();
  return floor;
}

}  // namespace

struct Evaluator::Machine {
  const detail::Program& prog;
  std::uint64_t fuel;
  std::uint64_t& steps;
  std::size_t depth_limit;
  std::size_t depth = 0;
  bool force_chains = false;

  bool match(const CPat& p, const Value& v, Value* frame) {
    switch (p.kind) {
      case PatternKind::Var:
        frame[p.slot] = v;
        return true;
      case PatternKind::Wild:
        return true;
      case PatternKind::Int:
      case PatternKind::Bool:
        return v == p.lit;
      case PatternKind::Con:
        break;
    }
    if (v.kind() != Value::Kind::Con || v.constructor() != p.con) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (!match(p.args[i], v.field(i), frame)) return false;
    }
    return true;
  }

  Value eval(const Code& c, Value* frame) {
    switch (c.op) {
      case Code::Op::Slot:
        return frame[c.index];
      case Code::Op::Lit:
        return c.lit;
      case Code::Op::Add:
        return eval(c.args[0], frame) + eval(c.args[1], frame);
      case Code::Op::Sub:
        return eval(c.args[0], frame) - eval(c.args[1], frame);
      case Code::Op::Mul:
        return eval(c.args[0], frame) * eval(c.args[1], frame);
      case Code::Op::Con: {
        detail::ArgBuf buf(c.args.size());
        for (std::size_t i = 0; i < c.args.size(); ++i) buf.data()[i] = eval(c.args[i], frame);
        return Value::con_move(c.con, buf.data(), buf.size());
      }
      case Code::Op::Chain: {
        if (!force_chains) return c.index == Code::kNone ? Value() : eval(c.args[c.index], frame);
        Value result;
        for (std::size_t i = 0; i < c.args.size(); ++i) {
          Value v = eval(c.args[i], frame);
          if (i == c.index) result = std::move(v);
        }
        return result;
      }
      case Code::Op::Call: {
        detail::ArgBuf buf(c.args.size());
        for (std::size_t i = 0; i < c.args.size(); ++i) buf.data()[i] = eval(c.args[i], frame);
        return invoke(c.index, buf);
      }
    }
    return Value();
  }

  struct DepthGuard {
    std::size_t& d;
    ~DepthGuard() { --d; }
  };

  Value invoke(std::uint32_t fn, detail::ArgBuf& args) {
    char probe;
    const char* floor = stack_floor();
    if (++depth > depth_limit || (floor && &probe < floor)) {
      --depth;
      throw EvalError(EvalError::Kind::FuelExhausted, "evaluation exceeded the recursion depth limit in '" +
                                                          prog.fns[fn].name + "'");
    }
    DepthGuard guard{depth};
    for (;;) {
      const auto& f = prog.fns[fn];
      if (fuel == 0) throw EvalError(EvalError::Kind::FuelExhausted, "fuel exhausted in '" + f.name + "'");
      --fuel;
      ++steps;
      detail::ArgBuf frame_buf(f.frame);
      Value* frame = frame_buf.data();
      const detail::CClause* chosen = nullptr;
      for (const auto& cl : f.clauses) {
        bool ok = true;
        for (std::size_t i = 0; ok && i < cl.pats.size(); ++i) ok = match(cl.pats[i], args.data()[i], frame);
        if (ok) {
          chosen = &cl;
          break;
        }
      }
      if (!chosen) {
        std::string msg = "no clause of '" + f.name + "' matches";
        for (std::size_t i = 0; i < args.size(); ++i) msg += " (" + to_string(args.data()[i]) + ")";
        throw EvalError(EvalError::Kind::MatchFailure, msg);
      }
      const Code& body = chosen->body;
      if (body.op == Code::Op::Call) {
        detail::ArgBuf next(body.args.size());
        for (std::size_t i = 0; i < body.args.size(); ++i) next.data()[i] = eval(body.args[i], frame);
        if (next.size() != args.size()) return invoke(body.index, next);
        for (std::size_t i = 0; i < next.size(); ++i) args.data()[i] = std::move(next.data()[i]);
        fn = body.index;
        continue;
      }
      return eval(body, frame);
    }
  }
};

Evaluator::Evaluator(const TypeEnv& env) : env_(env), prog_(std::make_unique<detail::Program>()) {
  auto& prog = *prog_;
  for (const auto& name : env.function_order()) {
    prog.ids.emplace(name, static_cast<std::uint32_t>(prog.fns.size()));
    detail::Fn fn;
    fn.name = name;
    fn.arity = env.function(name)->sig.arity();
    prog.fns.push_back(std::move(fn));
  }
  for (auto& fn : prog.fns) {
    const auto& decl = env.function(fn.name)->decl;
    for (const auto& c : decl.clauses) {
      detail::Compiler comp(env, prog);
      detail::CClause cc;
      for (const auto& p : c.patterns) cc.pats.push_back(comp.pattern(p));
      cc.body = comp.body(c.body);
      fn.frame = std::max(fn.frame, comp.frame_size());
      fn.clauses.push_back(std::move(cc));
    }
  }
}

Evaluator::~Evaluator() = default;

Value Evaluator::eval(const Term& t, const std::map<std::string, Value>& bindings, std::uint64_t fuel) {
  detail::Compiler comp(env_, *prog_);
  for (const auto& [name, v] : bindings) comp.slot_for(name);
  Code code = comp.term(t);
  steps_ = 0;
  Machine m{*prog_, fuel, steps_, depth_limit_, 0, force_chains_};
  detail::ArgBuf frame(comp.frame_size());
  for (const auto& [name, v] : bindings) frame.data()[comp.slot_for(name)] = v;
  return m.eval(code, frame.data());
}

Value Evaluator::call(const std::string& fn, std::span<const Value> args, std::uint64_t fuel) {
  auto it = prog_->ids.find(fn);
  if (it == prog_->ids.end()) throw std::invalid_argument("unknown function '" + fn + "'");
  if (prog_->fns[it->second].arity != args.size()) {
    throw std::invalid_argument("wrong number of arguments for '" + fn + "'");
  }
  steps_ = 0;
  Machine m{*prog_, fuel, steps_, depth_limit_, 0, force_chains_};
  detail::ArgBuf buf(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) buf.data()[i] = args[i];
  return m.invoke(it->second, buf);
}

Value evaluate(const TypeEnv& env, const Term& t, std::uint64_t fuel) {
  Evaluator ev(env);
  return ev.eval(t, {}, fuel);
}

namespace {

class Enumerator {
 public:
  Enumerator(const TypeEnv& env, const std::vector<Integer>& ints) : env_(env) {
    for (const auto& i : ints) ints_.push_back(Value::integer(i));
  }

  const std::vector<Value>& exact(const Sort& s, std::size_t size) {
    auto key = std::make_pair(to_string(s), size);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Value> out;
    switch (s.kind) {
      case Sort::Kind::Int:
        if (size == 0) out = ints_;
        break;
      case Sort::Kind::Bool:
        if (size == 0) out = {Value::boolean(false), Value::boolean(true)};
        break;
      case Sort::Kind::Proof:
      case Sort::Kind::Var:
        throw UnsupportedSort("cannot enumerate values of sort " + to_string(s));
      case Sort::Kind::Data:
        data(s, size, out);
        break;
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void data(const Sort& s, std::size_t size, std::vector<Value>& out) {
    const auto* d = env_.data(s.name);
    if (!d) throw UnsupportedSort("unknown data type " + s.name);
    for (const auto& cname : d->constructors) {
      const auto* c = env_.constructor(cname);
      if (c->fields.empty()) {
        if (size == 0) out.push_back(Value::con(c));
        continue;
      }
      if (size == 0) continue;
      std::map<std::string, Sort> inst;
      for (std::size_t i = 0; i < c->params.size(); ++i) inst.emplace(c->params[i], s.args[i]);
      std::vector<Sort> fields;
      for (const auto& f : c->fields) fields.push_back(substitute(f, inst));
      std::vector<Value> current(fields.size());
      fill(c, fields, 0, size - 1, current, out);
    }
  }

  // Distributes exactly `budget` over fields[i..] in lexicographic order of
  // the per-field sizes.
  void fill(const ConstructorInfo* c, const std::vector<Sort>& fields, std::size_t i, std::size_t budget,
            std::vector<Value>& current, std::vector<Value>& out) {
    if (i + 1 == fields.size()) {
      for (const auto& v : exact(fields[i], budget)) {
        current[i] = v;
        out.push_back(Value::con(c, current));
      }
      return;
    }
    for (std::size_t k = 0; k <= budget; ++k) {
      const auto values = exact(fields[i], k);
      for (const auto& v : values) {
        current[i] = v;
        fill(c, fields, i + 1, budget - k, current, out);
      }
    }
  }

  static Sort substitute(const Sort& s, const std::map<std::string, Sort>& inst) {
    if (s.kind == Sort::Kind::Var) {
      auto it = inst.find(s.name);
      return it == inst.end() ? s : it->second;
    }
    Sort out = s;
    for (auto& a : out.args) a = substitute(a, inst);
    return out;
  }

  const TypeEnv& env_;
  std::vector<Value> ints_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Value>> memo_;
};

}  // namespace

std::vector<Value> enumerate_values(const TypeEnv& env, const Sort& s, std::size_t size,
                                    const std::vector<Integer>& ints) {
  if (s.kind == Sort::Kind::Proof || s.kind == Sort::Kind::Var) {
    throw UnsupportedSort("cannot enumerate values of sort " + to_string(s));
  }
  Enumerator e(env, ints);
  std::vector<Value> out;
  for (std::size_t k = 0; k <= size; ++k) {
    const auto& v = e.exact(s, k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace eqcheck
