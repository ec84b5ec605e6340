#pragma once

#include <gmpxx.h>

#include <vector>

namespace lipsel {

// Number of k-subsets of an n-set, exact.
inline mpz_class count_combinations(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return c;
}

// Visits every k-subset of {0,...,n-1} in lexicographic order. The visitor
// returns false to stop early.
template <typename F>
void for_each_combination(int n, int k, F&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace lipsel
