#include "eqcheck/semantics/value.hpp"

#include <cstdlib>
#include <limits>
#include <new>

#include "eqcheck/syntax/pretty.hpp"

namespace eqcheck {
namespace detail {

struct BigCell : Cell {
  Integer value;
};

namespace {

// Free lists per field count; cells are recycled on the thread that frees
// them.
constexpr std::size_t kPooled = 8;

struct Pool {
  std::vector<void*> free[kPooled];
  ~Pool();
};

thread_local Pool pool;
thread_local bool pool_gone = false;

Pool::~Pool() {
  pool_gone = true;
  for (auto& list : free) {
    for (void* p : list) std::free(p);
  }
}

void* alloc_con(std::size_t n) {
  if (n < kPooled && !pool_gone && !pool.free[n].empty()) {
    void* p = pool.free[n].back();
    pool.free[n].pop_back();
    return p;
  }
  void* p = std::malloc(sizeof(ConCell) + n * sizeof(Value));
  if (!p) throw std::bad_alloc();
  return p;
}

void recycle(ConCell* cc, std::size_t n) {
  if (n < kPooled && !pool_gone) {
    pool.free[n].push_back(cc);
  } else {
    std::free(cc);
  }
}

}  // namespace

// Iterates along the last field so that long lists do not recurse.
void destroy(Cell* c) noexcept {
  bool first = true;
  while (c) {
    if (!first && --c->refs) return;
    first = false;
    if (c->size == kBig) {
      delete static_cast<BigCell*>(c);
      return;
    }
    auto* cc = static_cast<ConCell*>(c);
    std::size_t n = c->size;
    Value* f = cc->fields();
    Cell* next = nullptr;
    if (n) {
      next = f[n - 1].cell_;
      f[n - 1].cell_ = nullptr;
    }
    for (std::size_t i = 0; i < n; ++i) f[i].~Value();
    recycle(cc, n);
    c = next;
  }
}

}  // namespace detail

using detail::BigCell;
using detail::ConCell;

Value Value::integer(std::int64_t v) {
  Value out;
  out.kind_ = Kind::Int;
  out.small_ = v;
  return out;
}

Value Value::integer(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return integer(static_cast<std::int64_t>(v));
  }
  Value out;
  out.kind_ = Kind::Int;
  auto* c = new BigCell{{1, detail::kBig}, v};
  out.cell_ = c;
  return out;
}

Value Value::boolean(bool b) {
  Value out;
  out.kind_ = Kind::Bool;
  out.flag_ = b;
  return out;
}

Value Value::unit() { return Value(); }

Value Value::con(const ConstructorInfo* c, const Value* fields, std::size_t n) {
  void* mem = detail::alloc_con(n);
  auto* cell = static_cast<ConCell*>(mem);
  cell->refs = 1;
  cell->size = static_cast<std::uint32_t>(n);
  cell->con = c;
  Value* f = cell->fields();
  for (std::size_t i = 0; i < n; ++i) new (&f[i]) Value(fields[i]);
  Value out;
  out.kind_ = Kind::Con;
  out.cell_ = cell;
  return out;
}

Value Value::con_move(const ConstructorInfo* c, Value* fields, std::size_t n) {
  void* mem = detail::alloc_con(n);
  auto* cell = static_cast<ConCell*>(mem);
  cell->refs = 1;
  cell->size = static_cast<std::uint32_t>(n);
  cell->con = c;
  Value* f = cell->fields();
  for (std::size_t i = 0; i < n; ++i) new (&f[i]) Value(std::move(fields[i]));
  Value out;
  out.kind_ = Kind::Con;
  out.cell_ = cell;
  return out;
}

Value Value::con(const ConstructorInfo* c, std::vector<Value> fields) {
  return con(c, fields.data(), fields.size());
}

Integer Value::as_integer() const {
  if (cell_) return static_cast<BigCell*>(cell_)->value;
  return Integer(small_);
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Bool:
      return a.flag_ == b.flag_;
    case Value::Kind::Int:
      if (!a.cell_ && !b.cell_) return a.small_ == b.small_;
      return a.as_integer() == b.as_integer();
    case Value::Kind::Con:
      break;
  }
  if (a.cell_ == b.cell_) return true;
  if (a.constructor() != b.constructor()) return false;
  for (std::size_t i = 0, n = a.arity(); i < n; ++i) {
    if (!(a.field(i) == b.field(i))) return false;
  }
  return true;
}

Value operator+(const Value& a, const Value& b) {
  std::int64_t r;
  if (!a.cell_ && !b.cell_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Value::integer(r);
  return Value::integer(a.as_integer() + b.as_integer());
}

Value operator-(const Value& a, const Value& b) {
  std::int64_t r;
  if (!a.cell_ && !b.cell_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Value::integer(r);
  return Value::integer(a.as_integer() - b.as_integer());
}

Value operator*(const Value& a, const Value& b) {
  std::int64_t r;
  if (!a.cell_ && !b.cell_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Value::integer(r);
  return Value::integer(a.as_integer() * b.as_integer());
}

Term to_term(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int:
      return Term::int_lit(v.as_integer());
    case Value::Kind::Bool:
      return Term::bool_lit(v.as_bool());
    case Value::Kind::Unit:
      return Term::unit();
    case Value::Kind::Con:
      break;
  }
  std::vector<Term> args;
  for (std::size_t i = 0; i < v.arity(); ++i) args.push_back(to_term(v.field(i)));
  return Term::con(v.constructor()->name, std::move(args));
}

std::string to_string(const Value& v) { return pretty(to_term(v)); }

}  // namespace eqcheck
