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

// Lattice, dissipator and fermion-operator constructors shared by every
// engine. Units: hbar = e = 1; sites are numbered 1..N in the public API.

#pragma once

#include <vector>

#include "mfc/types.hpp"

namespace mfc {

/// Open tight-binding chain.
struct LatticeSpec {
  int n_sites = 6;
  double hopping = 1.0;

  void validate() const;
};

/// Uniform dephasing (measurement) rate plus pump at site 1 and loss at site N.
struct MonitorSpec {
  double gamma = 1.0;
  double gamma_s = 0.01;
  double gamma_d = 0.01;

  bool driven() const { return gamma_s > 0.0 || gamma_d > 0.0; }
  void validate() const;
};

/// H = sum_jk h_jk c_j^dag c_k.
struct QuadraticHamiltonian {
  Matrix h;

  int n_sites() const { return static_cast<int>(h.rows()); }
};

enum class JumpKind { Dephase, Pump, Loss };

/// Dephase -> n_site, Pump -> c_site^dag, Loss -> c_site. `site` is 1-based.
struct JumpSpec {
  JumpKind kind;
  int site;
  double rate;

  friend bool operator==(const JumpSpec&, const JumpSpec&) = default;
};

/// Jordan-Wigner annihilators on the 2^N Fock space. Site 1 is the leftmost
/// tensor factor (most significant bit of the basis index), and the string
/// of Z factors runs over sites 1..i-1. Per-site basis order is {|0>, |1>}.
struct FermionOps {
  int n_sites = 0;
  std::vector<SparseMatrix> annihilators;

  long dim() const { return 1L << n_sites; }
  const SparseMatrix& c(int site) const { return annihilators.at(site - 1); }
  SparseMatrix c_dag(int site) const { return c(site).adjoint(); }
  SparseMatrix number(int site) const;
  SparseMatrix total_number() const;
  SparseMatrix identity() const;
};

QuadraticHamiltonian build_hamiltonian(const LatticeSpec& spec);

/// N dephasing jumps, then the pump at site 1 and the loss at site N.
/// Zero-rate channels are omitted.
std::vector<JumpSpec> build_jump_set(const LatticeSpec& lattice, const MonitorSpec& monitor);

/// Throws Error(SizeLimit) above kMaxExactSites.
FermionOps fermion_operators(int n_sites);

/// Many-body operator sum_jk h_jk c_j^dag c_k.
SparseMatrix many_body_hamiltonian(const QuadraticHamiltonian& h, const FermionOps& ops);

/// Many-body jump operator L_k for a channel (rate not included).
SparseMatrix jump_operator(const JumpSpec& jump, const FermionOps& ops);

void check_exact_size(int n_sites);

}  // namespace mfc
