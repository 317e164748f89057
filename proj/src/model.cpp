// Copyright 2026 The mfchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfc/model.hpp"

#include <cmath>
#include <string>

namespace mfc {

namespace {

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::Config,
                std::string(name) + ": rate must be finite and non-negative, got " + std::to_string(value));
  }
}

}  // namespace

void LatticeSpec::validate() const {
  if (n_sites < 2) {
    throw Error(ErrorCode::Config, "n_sites: chain needs at least 2 sites, got " + std::to_string(n_sites));
  }
  if (!std::isfinite(hopping) || hopping <= 0.0) {
    throw Error(ErrorCode::Config, "hopping: must be positive, got " + std::to_string(hopping));
  }
}

void MonitorSpec::validate() const {
  require_rate(gamma, "gamma");
  require_rate(gamma_s, "gamma_s");
  require_rate(gamma_d, "gamma_d");
}

void check_exact_size(int n_sites) {
  if (n_sites < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_sites must be at least 1");
  }
  if (n_sites > kMaxExactSites) {
    throw Error(ErrorCode::SizeLimit, "exact engine size limit: n_sites=" + std::to_string(n_sites) +
                                          " exceeds the cap of " + std::to_string(kMaxExactSites));
  }
}

QuadraticHamiltonian build_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  QuadraticHamiltonian out{Matrix::Zero(n, n)};
  for (int i = 0; i + 1 < n; ++i) {
    out.h(i, i + 1) = spec.hopping;
    out.h(i + 1, i) = spec.hopping;
  }
  return out;
}

std::vector<JumpSpec> build_jump_set(const LatticeSpec& lattice, const MonitorSpec& monitor) {
  lattice.validate();
  monitor.validate();
  std::vector<JumpSpec> jumps;
  if (monitor.gamma > 0.0) {
    for (int site = 1; site <= lattice.n_sites; ++site) {
      jumps.push_back({JumpKind::Dephase, site, monitor.gamma});
    }
  }
  if (monitor.gamma_s > 0.0) jumps.push_back({JumpKind::Pump, 1, monitor.gamma_s});
  if (monitor.gamma_d > 0.0) jumps.push_back({JumpKind::Loss, lattice.n_sites, monitor.gamma_d});
  return jumps;
}

FermionOps fermion_operators(int n_sites) {
  check_exact_size(n_sites);
  FermionOps ops;
  ops.n_sites = n_sites;
  const long dim = ops.dim();
  for (int site = 1; site <= n_sites; ++site) {
    const int bit = n_sites - site;
    const long mask = 1L << bit;
    // Occupied sites to the left of `site` sit in the bits above `bit`.
    const long string_mask = (dim - 1) & ~((mask << 1) - 1);
    std::vector<Triplet> entries;
    entries.reserve(static_cast<size_t>(dim / 2));
    for (long s = 0; s < dim; ++s) {
      if ((s & mask) == 0) continue;
      const int parity = __builtin_popcountl(static_cast<unsigned long>(s & string_mask)) & 1;
      entries.emplace_back(s & ~mask, s, parity ? -1.0 : 1.0);
    }
    SparseMatrix c(dim, dim);
    c.setFromTriplets(entries.begin(), entries.end());
    ops.annihilators.push_back(std::move(c));
  }
  return ops;
}

SparseMatrix FermionOps::number(int site) const {
  SparseMatrix n = c_dag(site) * c(site);
  n.prune(Complex(0.0));
  return n;
}

SparseMatrix FermionOps::total_number() const {
  SparseMatrix total(dim(), dim());
  for (int site = 1; site <= n_sites; ++site) total += number(site);
  return total;
}

SparseMatrix FermionOps::identity() const {
  SparseMatrix id(dim(), dim());
  id.setIdentity();
  return id;
}

SparseMatrix many_body_hamiltonian(const QuadraticHamiltonian& h, const FermionOps& ops) {
  if (h.n_sites() != ops.n_sites) {
    throw Error(ErrorCode::InvalidArgument, "hamiltonian and fermion operators disagree on n_sites");
  }
  SparseMatrix out(ops.dim(), ops.dim());
  for (int j = 0; j < ops.n_sites; ++j) {
    for (int k = 0; k < ops.n_sites; ++k) {
      if (h.h(j, k) == Complex(0.0)) continue;
      out += h.h(j, k) * (ops.c_dag(j + 1) * ops.c(k + 1));
    }
  }
  out.prune(Complex(0.0));
  return out;
}

SparseMatrix jump_operator(const JumpSpec& jump, const FermionOps& ops) {
  if (jump.site < 1 || jump.site > ops.n_sites) {
    throw Error(ErrorCode::InvalidArgument, "jump site " + std::to_string(jump.site) + " outside the chain");
  }
  switch (jump.kind) {
    case JumpKind::Dephase:
      return ops.number(jump.site);
    case JumpKind::Pump:
      return ops.c_dag(jump.site);
    case JumpKind::Loss:
      return ops.c(jump.site);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown jump kind");
}

}  // namespace mfc
