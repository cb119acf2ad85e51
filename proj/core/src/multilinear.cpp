#include "unispace/multilinear.hpp"

#include <sstream>

namespace unispace {

std::vector<IndexTuple> enumerate_tuples(int d, int k) {
  std::vector<IndexTuple> out;
  if (k < 0 || k > d) return out;
  IndexTuple t(k);
  for (int i = 0; i < k; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    int p = k - 1;
    while (p >= 0 && t[p] == d - k + p) --p;
    if (p < 0) break;
    ++t[p];
    for (int q = p + 1; q < k; ++q) t[q] = t[q - 1] + 1;
  }
  return out;
}

bool valid_tuple(const IndexTuple& t, int d) {
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0 || t[i] >= d) return false;
    if (i > 0 && t[i] <= t[i - 1]) return false;
  }
  return true;
}

std::string tuple_key(const IndexTuple& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i] + 1);
  }
  return s;
}

IndexTuple parse_tuple_key(const std::string& key) {
  IndexTuple t;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    size_t pos = 0;
    int v = std::stoi(part, &pos);
    if (v < 1) throw std::invalid_argument("tuple indices are 1-based: '" + key + "'");
    t.push_back(v - 1);
  }
  if (!valid_tuple(t, 1 << 30)) throw std::invalid_argument("tuple key not strictly increasing: '" + key + "'");
  return t;
}

int shuffle_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple* merged) {
  merged->clear();
  merged->reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  long inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      merged->push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      inversions += static_cast<long>(a.size() - i);
      merged->push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

AltForm<double> to_double(const AltForm<Rational>& a) {
  AltForm<double> r(a.ambient_dim(), a.degree());
  for (const auto& [t, v] : a.coefficients()) r.set(t, v.get_d());
  return r;
}

}  // namespace unispace
