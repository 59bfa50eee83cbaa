// Copyright 2026 The xent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xent/local_clifford.hpp"

#include <stdexcept>
#include <string>

namespace xent {
namespace {

PauliString local_pauli(int arity, int bits) {
  PauliString p(static_cast<std::size_t>(arity));
  for (int j = 0; j < arity; ++j) {
    p.set_x(j, (bits >> (2 * j)) & 1);
    p.set_z(j, (bits >> (2 * j + 1)) & 1);
  }
  return p;
}

int pauli_bits(const PauliString& p) {
  int bits = 0;
  for (std::size_t j = 0; j < p.size(); ++j)
    bits |= (static_cast<int>(p.x(j)) << (2 * j)) | (static_cast<int>(p.z(j)) << (2 * j + 1));
  return bits;
}

LocalClifford from_strings(std::initializer_list<const char*> images) {
  std::vector<PauliString> v;
  for (const char* s : images) v.push_back(PauliString::parse(s));
  return LocalClifford::from_images(v);
}

}  // namespace

LocalClifford LocalClifford::from_images(std::span<const PauliString> images) {
  if (images.size() != 2 && images.size() != 4)
    throw std::invalid_argument("a local Clifford needs 2 or 4 generator images");
  LocalClifford c;
  c.arity_ = static_cast<int>(images.size() / 2);
  for (const auto& im : images)
    if (im.size() != static_cast<std::size_t>(c.arity_))
      throw std::invalid_argument("generator image has the wrong qubit count");
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const bool should_anticommute = (i / 2 == j / 2);
      if (images[i].commutes_with(images[j]) == should_anticommute)
        throw std::invalid_argument("generator images violate the commutation relations");
    }
  for (int v = 0; v < c.table_size(); ++v) {
    PhasedPauli acc(static_cast<std::size_t>(c.arity_));
    for (int j = 0; j < c.arity_; ++j) {
      const bool x = (v >> (2 * j)) & 1, z = (v >> (2 * j + 1)) & 1;
      if (x && z) acc.phase = (acc.phase + 1) & 3;
      if (x) acc *= images[2 * j];
      if (z) acc *= images[2 * j + 1];
    }
    const PauliString h = acc.to_hermitian();
    c.out_[v] = static_cast<std::uint8_t>(pauli_bits(h));
    c.neg_[v] = h.negative();
  }
  c.finalize();
  return c;
}

void LocalClifford::finalize() {
  const int bits = 2 * arity_;
  masks_ = {};
  for (int j = 0; j < bits; ++j)
    for (int i = 0; i < bits; ++i)
      if ((out_[1 << i] >> j) & 1) masks_[j] |= static_cast<std::uint8_t>(1 << i);
  // Moebius transform of the sign truth table.
  std::array<bool, 16> a{};
  for (int v = 0; v < table_size(); ++v) a[v] = neg_[v];
  for (int i = 0; i < bits; ++i)
    for (int v = 0; v < table_size(); ++v)
      if (v & (1 << i)) a[v] = a[v] ^ a[v ^ (1 << i)];
  anf_ = 0;
  for (int m = 0; m < table_size(); ++m)
    if (a[m]) anf_ |= static_cast<std::uint16_t>(1u << m);
}

PauliString LocalClifford::image(int v) const {
  PauliString p = local_pauli(arity_, out_[v]);
  p.set_negative(neg_[v]);
  return p;
}

PauliString LocalClifford::conjugate(const PauliString& local) const {
  if (local.size() != static_cast<std::size_t>(arity_))
    throw std::invalid_argument("Pauli size does not match gate arity");
  PauliString p = image(pauli_bits(local));
  if (local.negative()) p.negate();
  return p;
}

LocalClifford LocalClifford::inverse() const {
  LocalClifford inv;
  inv.arity_ = arity_;
  for (int v = 0; v < table_size(); ++v) {
    inv.out_[out_[v]] = static_cast<std::uint8_t>(v);
    inv.neg_[out_[v]] = neg_[v];
  }
  inv.finalize();
  return inv;
}

NamedGate parse_named_gate(std::string_view name) {
  static constexpr std::pair<std::string_view, NamedGate> kNames[] = {
      {"I", NamedGate::I},       {"H", NamedGate::H},     {"S", NamedGate::S},
      {"S_DAG", NamedGate::Sdg}, {"X", NamedGate::X},     {"Y", NamedGate::Y},
      {"Z", NamedGate::Z},       {"CNOT", NamedGate::CNOT}, {"CX", NamedGate::CNOT},
      {"CZ", NamedGate::CZ},     {"SWAP", NamedGate::SWAP}};
  for (const auto& [n, g] : kNames)
    if (n == name) return g;
  throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

const LocalClifford& named_gate(NamedGate g) {
  static const std::array<LocalClifford, 10> kGates = {
      from_strings({"+X", "+Z"}),
      from_strings({"+Z", "+X"}),
      from_strings({"+Y", "+Z"}),
      from_strings({"-Y", "+Z"}),
      from_strings({"+X", "-Z"}),
      from_strings({"-X", "-Z"}),
      from_strings({"-X", "+Z"}),
      from_strings({"+XX", "+Z_", "+_X", "+ZZ"}),
      from_strings({"+XZ", "+Z_", "+ZX", "+_Z"}),
      from_strings({"+_X", "+_Z", "+X_", "+Z_"}),
  };
  return kGates[static_cast<int>(g)];
}

const std::vector<std::array<std::uint8_t, 4>>& symplectic_group_sp4() {
  static const std::vector<std::array<std::uint8_t, 4>> kGroup = [] {
    std::vector<std::array<std::uint8_t, 4>> out;
    constexpr std::uint8_t e[4] = {1, 2, 4, 8};
    for (int code = 0; code < (1 << 16); ++code) {
      std::array<std::uint8_t, 4> cols{};
      for (int i = 0; i < 4; ++i) cols[i] = static_cast<std::uint8_t>((code >> (4 * (3 - i))) & 15);
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i)
        for (int j = i + 1; j < 4 && ok; ++j)
          ok = symplectic_product(cols[i], cols[j]) == symplectic_product(e[i], e[j]);
      if (ok) out.push_back(cols);
    }
    return out;
  }();
  return kGroup;
}

namespace {

const std::vector<LocalClifford>& two_qubit_table() {
  static const std::vector<LocalClifford> kTable = [] {
    const auto& sp = symplectic_group_sp4();
    std::vector<LocalClifford> table;
    table.reserve(kTwoQubitCliffordCount);
    std::vector<PauliString> images(4);
    for (std::uint32_t id = 0; id < kTwoQubitCliffordCount; ++id) {
      const auto& cols = sp[symplectic_class(id)];
      for (int i = 0; i < 4; ++i) {
        images[i] = local_pauli(2, cols[i]);
        images[i].set_negative((id >> i) & 1);
      }
      table.push_back(LocalClifford::from_images(images));
    }
    return table;
  }();
  return kTable;
}

}  // namespace

const LocalClifford& two_qubit_clifford(std::uint32_t id) {
  if (id >= kTwoQubitCliffordCount) throw std::out_of_range("two-qubit Clifford id out of range");
  return two_qubit_table()[id];
}

const LocalClifford& two_qubit_clifford_inverse(std::uint32_t id) {
  static const std::vector<LocalClifford> kInverse = [] {
    std::vector<LocalClifford> inv;
    inv.reserve(kTwoQubitCliffordCount);
    for (const auto& c : two_qubit_table()) inv.push_back(c.inverse());
    return inv;
  }();
  if (id >= kTwoQubitCliffordCount) throw std::out_of_range("two-qubit Clifford id out of range");
  return kInverse[id];
}

}  // namespace xent
