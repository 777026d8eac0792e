#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqcheck/syntax/ast.hpp"
#include "eqcheck/types/env.hpp"

namespace eqcheck {

class Value;

namespace detail {

struct Cell {
  std::uint32_t refs;
  std::uint32_t size;  // field count, or kBig for an integer cell
};

constexpr std::uint32_t kBig = 0xffffffffu;

struct ConCell : Cell {
  const ConstructorInfo* con;
  Value* fields() { return reinterpret_cast<Value*>(this + 1); }
};

// Frees a cell whose count reached zero.
void destroy(Cell* c) noexcept;

inline void release(Cell* c) noexcept {
  if (--c->refs == 0) destroy(c);
}

}  // namespace detail

/// Runtime value. Constructor cells are immutable and reference counted;
/// the count is not atomic, so a Value and its copies stay on one thread.
class Value {
 public:
  enum class Kind : std::uint8_t { Int, Bool, Unit, Con };

  Value() = default;
  Value(const Value& o) noexcept : kind_(o.kind_), flag_(o.flag_), small_(o.small_), cell_(o.cell_) {
    if (cell_) ++cell_->refs;
  }
  Value(Value&& o) noexcept : kind_(o.kind_), flag_(o.flag_), small_(o.small_), cell_(o.cell_) {
    o.cell_ = nullptr;
  }
  Value& operator=(const Value& o) noexcept {
    if (o.cell_) ++o.cell_->refs;
    if (cell_) detail::release(cell_);
    kind_ = o.kind_;
    flag_ = o.flag_;
    small_ = o.small_;
    cell_ = o.cell_;
    return *this;
  }
  Value& operator=(Value&& o) noexcept {
    if (this == &o) return *this;
    if (cell_) detail::release(cell_);
    kind_ = o.kind_;
    flag_ = o.flag_;
    small_ = o.small_;
    cell_ = o.cell_;
    o.cell_ = nullptr;
    return *this;
  }
  ~Value() {
    if (cell_) detail::release(cell_);
  }

  static Value integer(std::int64_t v);
  static Value integer(const Integer& v);
  static Value boolean(bool b);
  static Value unit();
  static Value con(const ConstructorInfo* c, const Value* fields, std::size_t n);
  static Value con(const ConstructorInfo* c, std::vector<Value> fields = {});
  /// Leaves `fields` moved-from.
  static Value con_move(const ConstructorInfo* c, Value* fields, std::size_t n);

  Kind kind() const { return kind_; }
  bool is_small_int() const { return kind_ == Kind::Int && !cell_; }
  std::int64_t small_int() const { return small_; }
  Integer as_integer() const;
  bool as_bool() const { return flag_; }

  const ConstructorInfo* constructor() const { return static_cast<detail::ConCell*>(cell_)->con; }
  std::size_t arity() const { return cell_->size; }
  const Value& field(std::size_t i) const { return static_cast<detail::ConCell*>(cell_)->fields()[i]; }

  friend bool operator==(const Value& a, const Value& b);

  // Arithmetic with an int64 fast path.
  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);

 private:
  friend void detail::destroy(detail::Cell* c) noexcept;

  Kind kind_ = Kind::Unit;
  bool flag_ = false;
  std::int64_t small_ = 0;
  detail::Cell* cell_ = nullptr;  // constructor cell, or big integer cell
};

std::string to_string(const Value& v);

/// The value as a ground term (constructors and literals only).
Term to_term(const Value& v);

}  // namespace eqcheck
