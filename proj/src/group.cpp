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

#include "xent/group.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace xent {
namespace {

struct Column {
  std::size_t qubit;
  bool is_z;
};

bool has(const PauliString& p, Column c) { return c.is_z ? p.z(c.qubit) : p.x(c.qubit); }

void xor_bits(PauliString& a, const PauliString& b) {
  for (std::size_t w = 0; w < a.num_words(); ++w) {
    a.x_words()[w] ^= b.x_words()[w];
    a.z_words()[w] ^= b.z_words()[w];
  }
}

std::vector<Column> interleaved(std::size_t n) {
  std::vector<Column> cols;
  cols.reserve(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    cols.push_back({q, false});
    cols.push_back({q, true});
  }
  return cols;
}

// Gauss-Jordan elimination in the given column order. `signed_rows` selects
// group products (rows must commute) versus plain GF(2) row XORs.
std::vector<PauliString> eliminate(std::vector<PauliString> rows, std::span<const Column> order,
                                   bool signed_rows) {
  std::size_t r = 0;
  for (const Column c : order) {
    if (r == rows.size()) break;
    std::size_t i = r;
    while (i < rows.size() && !has(rows[i], c)) ++i;
    if (i == rows.size()) continue;
    std::swap(rows[r], rows[i]);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == r || !has(rows[j], c)) continue;
      if (signed_rows)
        rows[j] *= rows[r];
      else
        xor_bits(rows[j], rows[r]);
    }
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (signed_rows && rows[i].negative()) throw std::invalid_argument("generators produce -I");
  rows.resize(r);
  return rows;
}

// Reduces p against an interleaved echelon basis. Returns the signed group
// element with the same bits as p, or nothing if p is outside the span.
std::optional<PauliString> reduce(std::span<const PauliString> rref, const PauliString& p) {
  PauliString residual = p;
  residual.set_negative(false);
  PauliString acc(p.size());
  for (const auto& row : rref) {
    Column pivot{0, false};
    bool found = false;
    for (std::size_t q = 0; q < row.size() && !found; ++q) {
      if (row.x(q)) pivot = {q, false}, found = true;
      else if (row.z(q)) pivot = {q, true}, found = true;
    }
    if (found && has(residual, pivot)) {
      xor_bits(residual, row);
      acc *= row;
    }
  }
  if (!residual.is_identity()) return std::nullopt;
  return acc;
}

}  // namespace

std::vector<PauliString> canonicalize(std::vector<PauliString> gens) {
  if (gens.empty()) return gens;
  const auto order = interleaved(gens.front().size());
  return eliminate(std::move(gens), order, true);
}

std::size_t group_rank(std::span<const PauliString> gens) {
  if (gens.empty()) return 0;
  const auto order = interleaved(gens.front().size());
  return eliminate({gens.begin(), gens.end()}, order, false).size();
}

bool group_contains(std::span<const PauliString> gens, const PauliString& p) {
  if (gens.empty()) return p.is_identity() && !p.negative();
  const auto rref = canonicalize({gens.begin(), gens.end()});
  const auto e = reduce(rref, p);
  return e && e->negative() == p.negative();
}

std::vector<PauliString> restrict_group(std::span<const PauliString> gens,
                                        std::span<const std::size_t> subset) {
  if (gens.empty()) return {};
  const std::size_t n = gens.front().size();
  std::vector<bool> inside(n, false);
  for (std::size_t q : subset) {
    if (q >= n) throw std::out_of_range("subset qubit out of range");
    inside[q] = true;
  }
  std::vector<Column> order;
  for (std::size_t q = 0; q < n; ++q)
    if (!inside[q]) order.push_back({q, false}), order.push_back({q, true});
  const std::size_t outside_cols = order.size();
  for (std::size_t q : subset) order.push_back({q, false}), order.push_back({q, true});

  const auto rows = eliminate({gens.begin(), gens.end()}, order, true);
  std::vector<PauliString> out;
  for (const auto& row : rows) {
    bool local = true;
    for (std::size_t c = 0; c < outside_cols && local; ++c) local = !has(row, order[c]);
    if (!local) continue;
    PauliString p(subset.size());
    for (std::size_t j = 0; j < subset.size(); ++j) {
      p.set_x(j, row.x(subset[j]));
      p.set_z(j, row.z(subset[j]));
    }
    p.set_negative(row.negative());
    out.push_back(std::move(p));
  }
  return out;
}

GroupOverlap group_overlap(std::span<const PauliString> a, std::span<const PauliString> b,
                           std::size_t r) {
  const auto ra = canonicalize({a.begin(), a.end()});
  const auto rb = canonicalize({b.begin(), b.end()});
  // Zassenhaus: rows (a|a) and (b|0); rows with vanishing left half span the
  // intersection.
  std::vector<PauliString> rows;
  auto widen = [r](const PauliString& p, bool copy_right) {
    PauliString w(2 * r);
    for (std::size_t q = 0; q < r; ++q) {
      w.set_x(q, p.x(q));
      w.set_z(q, p.z(q));
      if (copy_right) {
        w.set_x(r + q, p.x(q));
        w.set_z(r + q, p.z(q));
      }
    }
    return w;
  };
  for (const auto& p : ra) rows.push_back(widen(p, true));
  for (const auto& p : rb) rows.push_back(widen(p, false));
  const auto order = interleaved(2 * r);
  rows = eliminate(std::move(rows), order, false);

  GroupOverlap out;
  int dim = 0;
  for (const auto& row : rows) {
    bool left_zero = true;
    for (std::size_t q = 0; q < r && left_zero; ++q) left_zero = !row.x(q) && !row.z(q);
    if (!left_zero) continue;
    PauliString u(r);
    for (std::size_t q = 0; q < r; ++q) {
      u.set_x(q, row.x(r + q));
      u.set_z(q, row.z(r + q));
    }
    const auto ea = reduce(ra, u), eb = reduce(rb, u);
    if (!ea || !eb) throw std::logic_error("intersection element outside a group");
    if (ea->negative() != eb->negative()) out.zero = true;
    ++dim;
  }
  out.log2 = dim - static_cast<int>(r);
  return out;
}

}  // namespace xent
