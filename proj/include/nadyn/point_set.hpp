#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "nadyn/rational.hpp"

namespace nadyn {

using PointId = std::uint32_t;

/// A subset of a finite carrier, stored as a bitset over dense point ids.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : bits_(universe) {}
  PointSet(std::size_t universe, std::initializer_list<PointId> members) : bits_(universe) {
    for (auto p : members) insert(p);
  }

  static PointSet full(std::size_t universe) {
    PointSet s(universe);
    s.bits_.set();
    return s;
  }

  template <class Range>
  static PointSet of(std::size_t universe, const Range& members) {
    PointSet s(universe);
    for (auto p : members) s.insert(static_cast<PointId>(p));
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool is_full() const { return bits_.all(); }

  bool contains(PointId p) const { return p < bits_.size() && bits_.test(p); }

  void insert(PointId p) {
    if (p >= bits_.size()) throw Error("point id " + std::to_string(p) + " outside carrier of size " + std::to_string(bits_.size()));
    bits_.set(p);
  }
  void erase(PointId p) {
    if (p < bits_.size()) bits_.reset(p);
  }

  bool is_subset_of(const PointSet& other) const {
    check_same(other);
    return bits_.is_subset_of(other.bits_);
  }
  bool intersects(const PointSet& other) const {
    check_same(other);
    return bits_.intersects(other.bits_);
  }

  PointSet& operator&=(const PointSet& o) {
    check_same(o);
    bits_ &= o.bits_;
    return *this;
  }
  PointSet& operator|=(const PointSet& o) {
    check_same(o);
    bits_ |= o.bits_;
    return *this;
  }
  PointSet& operator-=(const PointSet& o) {
    check_same(o);
    bits_ -= o.bits_;
    return *this;
  }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }

  PointSet complement() const {
    PointSet c = *this;
    c.bits_.flip();
    return c;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) { return a.bits_ == b.bits_; }

  /// Calls fn(id) for every member in increasing id order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) fn(static_cast<PointId>(i));
  }

  std::vector<PointId> members() const {
    std::vector<PointId> out;
    out.reserve(size());
    for_each([&](PointId p) { out.push_back(p); });
    return out;
  }

  /// Smallest member, or universe() when empty.
  PointId first() const {
    auto i = bits_.find_first();
    return i == Bits::npos ? static_cast<PointId>(bits_.size()) : static_cast<PointId>(i);
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  void check_same(const PointSet& o) const {
    if (o.bits_.size() != bits_.size()) throw Error("point sets over different carriers");
  }

  Bits bits_;
};

}  // namespace nadyn
