#pragma once

// Closed-form Kakeya lower bounds and the rank/crank certificate pipelines.
// Each pipeline computes the actual matrices and checks the inequalities of
// the corresponding proof between computed quantities.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kakeya/kakeya_set.hpp"
#include "kakeya/ring.hpp"

namespace kakeya {

// q^n / (2 - 1/q)^n.
mpq_class fq_bound(std::uint64_t q, unsigned n);
// N^n / prod_i (2 - 1/p_i)^n; N must be square-free.
mpq_class squarefree_bound(std::uint64_t N, unsigned n);

struct LemmaCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BoundReport {
  std::string pipeline;
  RingSpec spec;
  std::uint64_t set_size = 0;
  mpq_class closed_form;
  std::uint64_t certified = 0;
  // Named intermediate ranks and parameters, in computation order.
  std::vector<std::pair<std::string, std::uint64_t>> quantities;
  std::vector<LemmaCheck> checks;

  bool passed() const;
  std::optional<std::uint64_t> quantity(const std::string& name) const;
  void record(const std::string& name, std::uint64_t value);
  void check(const std::string& name, bool ok, std::string detail = {});
};

// Integers above 2^53 become decimal strings.
nlohmann::json json_count(std::uint64_t v);
nlohmann::json json_rational(const mpq_class& q);
nlohmann::json to_json(const BoundReport& r);

// All pipelines require a valid set (InvalidArgument otherwise) and throw
// AssertionFailure when a row identity that holds by construction fails.
// Oversized matrices raise GuardExceeded.

// F_p^n: A = M_S W_{p,n}, certified = rank(A).
BoundReport certify_prime(const KakeyaSet& s,
                          std::size_t guard = kDefaultCellGuard);

// (Z/pqZ)^n, p < q, over F_p: M_S (W_{p,n} (x) I_{q^n}) with columns in CRT
// order.
BoundReport certify_two_primes(const KakeyaSet& s,
                               std::size_t guard = kDefaultCellGuard);

struct SquarefreeOptions {
  std::optional<unsigned> k;         // default p1
  std::optional<std::uint64_t> p1;   // default smallest prime factor
  std::optional<unsigned> m;         // default 2k - k/p1
  std::size_t guard = kDefaultCellGuard;
};
// Family {C^k_{L_1(b)} (x) 1_{L_0(b)}}, certified = ceil(crank / C(m+n-1,n)).
// A prime modulus delegates to certify_prime.
BoundReport certify_squarefree(const KakeyaSet& s,
                               const SquarefreeOptions& opts = {});

// (Z/p^kZ)^n: M = p^{-k} M_S F over Q(gamma); certified = rank_{F_p}
// W_{p^k,n}.
BoundReport certify_prime_power(const KakeyaSet& s,
                                std::size_t guard = kDefaultCellGuard);

}  // namespace kakeya
