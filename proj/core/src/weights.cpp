#include "logdrw/weights.hpp"

#include <algorithm>
#include <sstream>

namespace logdrw {

void LocalModel::validate() const {
  if (p < 2) throw std::invalid_argument("model: p must be prime >= 2");
  if (n < 1 || n > 30) throw std::invalid_argument("model: 1 <= n <= 30");
  if (e < 0 || e > n) throw std::invalid_argument("model: 0 <= e <= n");
  if (f < 0 || f > 30) throw std::invalid_argument("model: 0 <= f <= 30");
  if (d < 0 || d > e) throw std::invalid_argument("model: 0 <= d <= e");
  if (log_point_base && d == 0)
    throw std::invalid_argument("model: log-point base needs d >= 1");
  std::uint32_t rm = rel_mask();
  for (int i = 1; i <= n; ++i)
    if ((rm >> i) & 1u)
      if (i > e) throw std::invalid_argument("model: relation positions must be log positions");
}

std::string LocalModel::descriptor() const {
  std::ostringstream os;
  os << (d >= 1 ? "semistable:" : "poly:");
  os << "p=" << p << ",n=" << n << ",e=" << e << ",f=" << f;
  if (d >= 1) os << ",d=" << d;
  if (log_point_base) os << ",base=log";
  return os.str();
}

LocalModel parse_model(const std::string& s) {
  LocalModel mdl;
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("model descriptor: missing family");
  std::string family = s.substr(0, colon);
  bool semi = false;
  if (family == "poly")
    semi = false;
  else if (family == "semistable")
    semi = true;
  else
    throw std::invalid_argument("model descriptor: unknown family '" + family + "'");
  mdl.d = 0;
  std::string rest = s.substr(colon + 1);
  std::istringstream is(rest);
  std::string item;
  bool saw_d = false, saw_n = false, saw_e = false;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("model descriptor: bad field " + item);
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "p")
      mdl.p = std::stoll(val);
    else if (key == "n") {
      mdl.n = std::stoi(val);
      saw_n = true;
    } else if (key == "e") {
      mdl.e = std::stoi(val);
      saw_e = true;
    }
    else if (key == "f")
      mdl.f = std::stoi(val);
    else if (key == "d") {
      mdl.d = std::stoi(val);
      saw_d = true;
    } else if (key == "base") {
      if (val != "log") throw std::invalid_argument("model descriptor: base must be 'log'");
      mdl.log_point_base = true;
    } else
      throw std::invalid_argument("model descriptor: unknown key " + key);
  }
  if (!saw_n || !saw_e) throw std::invalid_argument("model descriptor: n and e are required");
  if (semi && !saw_d) throw std::invalid_argument("model descriptor: semistable needs d");
  if (!semi && saw_d && mdl.d != 0)
    throw std::invalid_argument("model descriptor: poly family cannot carry d");
  mdl.validate();
  return mdl;
}

WeightEntry WeightEntry::make(i64 num, int tpow, i64 p) {
  if (num < 0 || tpow < 0) throw std::invalid_argument("weight entry: negative data");
  WeightEntry w{num, tpow, false};
  if (num == 0) {
    w.tpow = 0;
    return w;
  }
  while (w.tpow > 0 && w.num % p == 0) {
    w.num /= p;
    --w.tpow;
  }
  return w;
}

int WeightEntry::ord(i64 p) const {
  if (pole) return kOrdNegInf;
  if (num == 0) return kOrdPosInf;
  return vp(num, p, 62) - tpow;
}

WeightEntry WeightEntry::times_p(i64 p) const {
  if (pole) return *this;
  if (num == 0) return *this;
  if (tpow > 0) return WeightEntry{num, tpow - 1, false};
  return WeightEntry{num * p, 0, false};
}

WeightEntry WeightEntry::div_p(i64 p) const {
  if (pole) return *this;
  if (num == 0) return *this;
  return make(num, tpow + 1, p);
}

bool Weight::valid_for(const LocalModel& mdl) const {
  if (n() != mdl.n) return false;
  for (int i = mdl.e + 1; i <= mdl.n; ++i)
    if (k[i - 1].pole) return false;
  if (mdl.semistable()) {
    // The relation set must not be contained in Supp k+.
    bool covered = true;
    for (int i = 1; i <= mdl.n && covered; ++i)
      if (mdl.in_relation(i) && (k[i - 1].pole || k[i - 1].is_zero())) covered = false;
    if (covered) return false;
  }
  return true;
}

std::vector<int> Weight::supp() const {
  std::vector<int> s;
  for (int i = 1; i <= n(); ++i)
    if (k[i - 1].pole || !k[i - 1].is_zero()) s.push_back(i);
  return s;
}

std::vector<int> Weight::supp_plus() const {
  std::vector<int> s;
  for (int i = 1; i <= n(); ++i)
    if (!k[i - 1].pole && !k[i - 1].is_zero()) s.push_back(i);
  return s;
}

std::vector<int> Weight::poles() const {
  std::vector<int> s;
  for (int i = 1; i <= n(); ++i)
    if (k[i - 1].pole) s.push_back(i);
  return s;
}

Weight Weight::plus() const {
  Weight r = *this;
  for (auto& w : r.k)
    if (w.pole) w = WeightEntry::zero();
  return r;
}

bool Weight::integral() const {
  for (auto& w : k) {
    if (w.pole) return false;
    if (w.tpow > 0) return false;
  }
  return true;
}

bool Weight::integral_after_mul(i64, int s) const {
  for (auto& w : k)
    if (!w.pole && w.tpow > s) return false;
  return true;
}

int Weight::u_plus(i64) const {
  int u = 0;
  for (auto& w : k)
    if (!w.pole) u = std::max(u, (int)w.tpow);
  return u;
}

Weight Weight::times_p(i64 p) const {
  Weight r = *this;
  for (auto& w : r.k) w = w.times_p(p);
  return r;
}

Weight Weight::div_p(i64 p) const {
  Weight r = *this;
  for (auto& w : r.k) w = w.div_p(p);
  return r;
}

std::pair<i64, int> Weight::abs_plus(i64 p) const {
  int den = u_plus(p);
  i64 num = 0;
  for (auto& w : k) {
    if (w.pole || w.num == 0) continue;
    num += w.num * ipow(p, den - w.tpow);
  }
  return {num, den};
}

std::vector<int> canonical_order(const Weight& k, i64 p) {
  std::vector<int> s = k.supp();
  std::stable_sort(s.begin(), s.end(), [&](int a, int b) {
    int oa = k.k[a - 1].ord(p), ob = k.k[b - 1].ord(p);
    if (oa != ob) return oa < ob;
    return a < b;
  });
  return s;
}

int t_of(const Weight& k, const std::vector<int>& interval, i64 p) {
  if (interval.empty()) throw std::invalid_argument("t_of: empty interval");
  return -k.k[interval.front() - 1].ord(p);
}

int u_of_interval(const Weight& k, const std::vector<int>& interval, i64 p) {
  return std::max(0, t_of(k, interval, p));
}

bool validate_partition(const Weight& k, const Partition& part, i64 p) {
  std::vector<int> sp = canonical_order(k, p);
  size_t npoles = k.poles().size();
  int r = (int)(sp.size() - npoles);
  if (part.seg.empty()) return false;
  long total = 0;
  for (size_t j = 0; j < part.seg.size(); ++j) {
    if (part.seg[j] < 0) return false;
    if (j >= 1 && part.seg[j] == 0) return false;
    total += part.seg[j];
  }
  return total == r;
}

std::vector<Partition> enumerate_partitions(const Weight& k, i64 p) {
  int r = (int)k.supp_plus().size();
  (void)p;
  std::vector<Partition> out;
  // seg[0] in [0,r]; the rest is a composition of r - seg[0].
  std::vector<int> seg;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(Partition{seg});
      return;
    }
    for (int s = 1; s <= remaining; ++s) {
      seg.push_back(s);
      self(self, remaining - s);
      seg.pop_back();
    }
  };
  for (int i0 = 0; i0 <= r; ++i0) {
    seg = {i0};
    rec(rec, r - i0);
  }
  return out;
}

std::vector<std::vector<int>> partition_intervals(const Weight& k, const Partition& part, i64 p) {
  std::vector<int> order = canonical_order(k, p);
  size_t npoles = k.poles().size();
  std::vector<int> body(order.begin() + npoles, order.end());
  std::vector<std::vector<int>> out;
  size_t pos = 0;
  for (size_t j = 0; j < part.seg.size(); ++j) {
    std::vector<int> iv(body.begin() + pos, body.begin() + pos + part.seg[j]);
    out.push_back(std::move(iv));
    pos += part.seg[j];
  }
  if (pos != body.size()) throw std::invalid_argument("partition does not tile the support");
  return out;
}

namespace {

std::vector<WeightEntry> entry_range(const LocalModel& mdl, const WeightBounds& b, bool log_pos,
                                     bool allow_poles) {
  std::vector<WeightEntry> vals;
  vals.push_back(WeightEntry::zero());
  for (int t = 0; t <= b.max_den; ++t)
    for (i64 a = 1; a <= b.max_num; ++a) {
      if (t > 0 && a % mdl.p == 0) continue;
      WeightEntry w = WeightEntry::make(a, t, mdl.p);
      vals.push_back(w);
    }
  if (log_pos && allow_poles) vals.push_back(WeightEntry::make_pole());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace

std::vector<Weight> enumerate_weights(const LocalModel& mdl, const WeightBounds& b) {
  std::vector<std::vector<WeightEntry>> per_pos;
  for (int i = 1; i <= mdl.n; ++i)
    per_pos.push_back(entry_range(mdl, b, i <= mdl.e, b.allow_poles));
  std::vector<Weight> out;
  Weight cur;
  cur.k.assign(mdl.n, WeightEntry::zero());
  auto rec = [&](auto&& self, int i) -> void {
    if (i == mdl.n) {
      if (cur.valid_for(mdl)) out.push_back(cur);
      return;
    }
    for (auto& w : per_pos[i]) {
      cur.k[i] = w;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<Weight> enumerate_pole_free_weights(const LocalModel& mdl, const WeightBounds& b) {
  WeightBounds nb = b;
  nb.allow_poles = false;
  return enumerate_weights(mdl, nb);
}

}  // namespace logdrw
