#pragma once

#include <cstdint>
#include <map>

#include "brw/model.hpp"

namespace brw {

using Site = long long;
using Count = long long;

/// Per-site individual counts. Sites with zero count are not stored.
class Configuration {
 public:
  Configuration() = default;

  static Configuration single(Site site, Count count = 1) {
    Configuration c;
    c.add(site, count);
    return c;
  }

  void add(Site site, Count delta) {
    Count& slot = counts_[site];
    slot += delta;
    if (slot < 0) throw InvalidArgument("site count would become negative");
    total_ += delta;
    if (slot == 0) counts_.erase(site);
  }

  Count count(Site site) const {
    auto it = counts_.find(site);
    return it == counts_.end() ? 0 : it->second;
  }

  Count total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  const std::map<Site, Count>& sites() const noexcept { return counts_; }

  /// True when every occupied site lies in {-N..N}.
  bool within(IntervalRadius n) const {
    return counts_.empty() ||
           (n.contains(counts_.begin()->first) && n.contains(counts_.rbegin()->first));
  }

  /// Sitewise a <= b.
  friend bool dominated_by(const Configuration& a, const Configuration& b) {
    for (const auto& [site, c] : a.counts_) {
      if (c > b.count(site)) return false;
    }
    return true;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::map<Site, Count> counts_;
  Count total_ = 0;
};

}  // namespace brw
