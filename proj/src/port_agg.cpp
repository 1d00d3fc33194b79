#include "gnnl/port_agg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gnnl/graph.hpp"

namespace gnnl {

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt pow10(std::uint64_t e) {
  BigInt r = 1;
  BigInt base = 10;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

PortAggregator::PortAggregator(std::uint64_t alphabet_bound) : n_(alphabet_bound) {
  if (n_ < 2) throw Error("alphabet bound N must be at least 2");
  k_ = 1;
  k_digits_ = 0;
  while (k_ < n_) {
    k_ *= 10;
    ++k_digits_;
  }
}

Rational PortAggregator::encode_message(std::uint64_t z) const {
  if (z >= n_) throw Error("message index " + std::to_string(z) + " is not below N");
  return Rational(BigInt(1), pow10(k_digits_ * z));
}

Rational PortAggregator::port_weight(int port) const {
  if (port < 1) throw Error("ports are numbered from 1");
  return Rational(BigInt(1), pow10(k_ * n_ * static_cast<std::uint64_t>(port - 1)));
}

Rational PortAggregator::aggregate(const std::vector<PortMessage>& seq) const {
  if (seq.size() >= n_) throw Error("sequence length must be below N");
  std::set<int> seen;
  std::vector<std::uint64_t> exponents;
  for (const auto& m : seq) {
    if (m.port < 1) throw Error("ports are numbered from 1");
    if (m.z >= n_) throw Error("message index " + std::to_string(m.z) + " is not below N");
    if (!seen.insert(m.port).second) {
      throw Error("duplicate port " + std::to_string(m.port) + " in message sequence");
    }
    exponents.push_back(k_ * n_ * static_cast<std::uint64_t>(m.port - 1) + k_digits_ * m.z);
  }
  if (exponents.empty()) return 0;
  // Exponents are distinct, so the numerator over 10^E ends in the digit 1
  // and the fraction is already in lowest terms.
  const std::uint64_t e = *std::max_element(exponents.begin(), exponents.end());
  BigInt num = 0;
  for (std::uint64_t x : exponents) num += pow10(e - x);
  return Rational(num, pow10(e));
}

std::optional<std::vector<PortMessage>> PortAggregator::decode(const Rational& code) const {
  if (code < 0) return std::nullopt;
  const BigInt num = boost::multiprecision::numerator(code);
  const BigInt den = boost::multiprecision::denominator(code);
  if (num == 0) return std::vector<PortMessage>{};

  // Every valid code is reduced over an exact power of ten.
  const std::uint64_t e = boost::multiprecision::lsb(den);
  if (den != pow10(e)) return std::nullopt;
  const BigInt& scaled = num;
  const std::string digits = scaled.str();

  const std::uint64_t block = k_ * n_;
  std::vector<PortMessage> out;
  std::set<int> ports;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[i];
    if (c == '0') continue;
    if (c != '1') return std::nullopt;
    // Digit i carries 10^-(exponent).
    const auto place = static_cast<std::int64_t>(digits.size() - 1 - i);
    const std::int64_t exponent = static_cast<std::int64_t>(e) - place;
    if (exponent < 0) return std::nullopt;
    const auto ex = static_cast<std::uint64_t>(exponent);
    const std::uint64_t offset = ex % block;
    if (offset % k_digits_ != 0) return std::nullopt;
    const std::uint64_t z = offset / k_digits_;
    if (z >= n_) return std::nullopt;
    const int port = static_cast<int>(ex / block) + 1;
    if (!ports.insert(port).second) return std::nullopt;
    out.push_back({z, port});
  }
  if (out.size() >= n_) return std::nullopt;
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.port < b.port; });
  return out;
}

PortAggSelftest port_agg_selftest(std::uint64_t alphabet, int ports,
                                  std::optional<std::uint64_t> alphabet_bound) {
  if (alphabet < 1 || ports < 1) throw Error("selftest needs a nonempty alphabet and port set");
  PortAggSelftest r;
  r.alphabet = alphabet;
  r.ports = ports;
  r.alphabet_bound = alphabet_bound.value_or(
      std::max<std::uint64_t>(10, std::max<std::uint64_t>(alphabet, static_cast<std::uint64_t>(ports)) + 1));
  const PortAggregator agg(r.alphabet_bound);

  std::set<Rational> codes;
  // Each port is either unused (0) or carries a message 1..alphabet.
  std::vector<std::uint64_t> choice(static_cast<std::size_t>(ports), 0);
  while (true) {
    std::vector<PortMessage> seq;
    for (int p = 0; p < ports; ++p) {
      if (choice[static_cast<std::size_t>(p)]) seq.push_back({choice[static_cast<std::size_t>(p)], p + 1});
    }
    const Rational code = agg.aggregate(seq);
    ++r.sequences;
    codes.insert(code);
    auto decoded = agg.decode(code);
    if (!decoded || *decoded != seq) ++r.decode_failures;
    std::vector<PortMessage> reversed(seq.rbegin(), seq.rend());
    if (agg.aggregate(reversed) != code) ++r.order_failures;

    std::size_t i = 0;
    while (i < choice.size() && choice[i] == alphabet) choice[i++] = 0;
    if (i == choice.size()) break;
    ++choice[i];
  }
  r.distinct_codes = codes.size();
  return r;
}

std::string format_selftest(const PortAggSelftest& r) {
  std::ostringstream out;
  out << "alphabet " << r.alphabet << "\n"
      << "ports " << r.ports << "\n"
      << "alphabet_bound " << r.alphabet_bound << "\n"
      << "sequences " << r.sequences << "\n"
      << "distinct_codes " << r.distinct_codes << "\n"
      << "decode_failures " << r.decode_failures << "\n"
      << "order_failures " << r.order_failures << "\n"
      << "result " << (r.passed() ? "injective" : "NOT injective") << "\n";
  return out.str();
}

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

}  // namespace gnnl
