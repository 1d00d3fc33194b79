#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gnnl {

using Rational = boost::multiprecision::cpp_rational;

/// One (message, port) pair; the message is given by its alphabet index Z(x).
struct PortMessage {
  std::uint64_t z = 0;
  int port = 1;

  friend bool operator==(const PortMessage&, const PortMessage&) = default;
  friend auto operator<=>(const PortMessage&, const PortMessage&) = default;
};

/// Injective sum aggregation h = sum_i g(p_i) f(x_i) over exact rationals,
/// with f(x) = k^-Z(x), g(p) = 10^-(k N (p - 1)) and k = 10^ceil(log10 N).
/// Every term is a single decimal digit 1; terms of different ports occupy
/// disjoint digit blocks, so the code is decodable.
class PortAggregator {
 public:
  /// N >= 2 bounds both the alphabet indices (Z < N) and the sequence length.
  /// A code on ports up to P has about k N P decimal digits.
  explicit PortAggregator(std::uint64_t alphabet_bound);

  std::uint64_t alphabet_bound() const { return n_; }
  std::uint64_t k() const { return k_; }

  Rational encode_message(std::uint64_t z) const;
  Rational port_weight(int port) const;
  /// Throws Error on a duplicate or non-positive port, Z >= N, or length >= N.
  Rational aggregate(const std::vector<PortMessage>& seq) const;
  /// Inverse of aggregate; the result is sorted by port. nullopt when `code`
  /// is not the image of a valid sequence.
  std::optional<std::vector<PortMessage>> decode(const Rational& code) const;

 private:
  std::uint64_t n_;
  std::uint64_t k_;
  std::uint64_t k_digits_;  // log10 k
};

struct PortAggSelftest {
  std::uint64_t alphabet = 0;  // Z ranges over 1..alphabet
  int ports = 0;               // ports 1..ports, sequences of length <= ports
  std::uint64_t alphabet_bound = 0;
  std::size_t sequences = 0;
  std::size_t distinct_codes = 0;
  std::size_t decode_failures = 0;
  std::size_t order_failures = 0;  // permuted sequence gave a different code

  bool passed() const {
    return distinct_codes == sequences && decode_failures == 0 && order_failures == 0;
  }
};

/// Exhaustive injectivity check over every sequence with distinct ports.
/// N defaults to max(10, max(alphabet, ports) + 1).
PortAggSelftest port_agg_selftest(std::uint64_t alphabet, int ports,
                                  std::optional<std::uint64_t> alphabet_bound = std::nullopt);

std::string format_selftest(const PortAggSelftest& r);

/// Reduced fraction "num/den".
std::string to_string(const Rational& q);

}  // namespace gnnl
