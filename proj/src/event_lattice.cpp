#include "evflow/event_lattice.hpp"

#include <algorithm>
#include <sstream>

namespace evflow {

namespace {

struct MicroTables {
  std::array<std::array<std::uint8_t, 256>, 256> compose{};  // [g][f] = g∘f
  std::array<std::array<std::uint8_t, 256>, 256> meet{};

  MicroTables() {
    for (unsigned g = 0; g < 256; ++g) {
      for (unsigned f = 0; f < 256; ++f) {
        compose[g][f] =
            mf_compose_direct(MicroFn(static_cast<std::uint8_t>(g)),
                              MicroFn(static_cast<std::uint8_t>(f)))
                .bits();
        meet[g][f] = mf_meet_direct(MicroFn(static_cast<std::uint8_t>(g)),
                                    MicroFn(static_cast<std::uint8_t>(f)))
                         .bits();
      }
    }
  }
};

const MicroTables& tables() {
  static const MicroTables t;
  return t;
}

// Walks two sorted sparse vectors in lockstep; `fn` receives the handler and
// the value from each side (fallback when absent).
template <typename A, typename B, typename Fn>
std::size_t merge_walk(const std::vector<std::pair<HandlerId, A>>& a,
                       const std::vector<std::pair<HandlerId, B>>& b,
                       A a_default, B b_default, Fn&& fn) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t visited = 0;
  while (i < a.size() || j < b.size()) {
    ++visited;
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      fn(a[i].first, a[i].second, b_default);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      fn(b[j].first, a_default, b[j].second);
      ++j;
    } else {
      fn(a[i].first, a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
  return visited;
}

}  // namespace

char hstate_char(HState s) {
  switch (s) {
    case HState::X:
      return 'X';
    case HState::S:
      return 'S';
    case HState::R:
      return 'R';
    case HState::E:
      return 'E';
  }
  return '?';
}

HState mf_apply(MicroFn f, HState s) { return f(s); }

MicroFn mf_compose_direct(MicroFn g, MicroFn f) {
  return MicroFn::from_table(g(f(HState::X)), g(f(HState::S)),
                             g(f(HState::R)), g(f(HState::E)));
}

MicroFn mf_meet_direct(MicroFn f, MicroFn g) {
  return MicroFn::from_table(hstate_meet(f(HState::X), g(HState::X)),
                             hstate_meet(f(HState::S), g(HState::S)),
                             hstate_meet(f(HState::R), g(HState::R)),
                             hstate_meet(f(HState::E), g(HState::E)));
}

MicroFn mf_compose(MicroFn g, MicroFn f) {
  return MicroFn(tables().compose[g.bits()][f.bits()]);
}

MicroFn mf_meet(MicroFn f, MicroFn g) {
  return MicroFn(tables().meet[f.bits()][g.bits()]);
}

std::size_t verify_micro_tables() {
  const MicroTables fresh;
  const MicroTables& used = tables();
  std::size_t bad = 0;
  for (unsigned g = 0; g < 256; ++g) {
    for (unsigned f = 0; f < 256; ++f) {
      if (fresh.compose[g][f] != used.compose[g][f]) ++bad;
      if (fresh.meet[g][f] != used.meet[g][f]) ++bad;
    }
  }
  return bad;
}

bool mf_is_monotone(MicroFn f) {
  for (HState a : kAllStates) {
    for (HState b : kAllStates) {
      if (hstate_geq(a, b) && !hstate_geq(f(a), f(b))) return false;
    }
  }
  return true;
}

std::string to_string(MicroFn f) {
  std::string out = "<X,S,R,E>-><";
  for (std::size_t i = 0; i < kAllStates.size(); ++i) {
    if (i) out += ',';
    out += hstate_char(f(kAllStates[i]));
  }
  out += '>';
  return out;
}

// ---- HStateMap -------------------------------------------------------------

HStateMap HStateMap::all(HState s, std::size_t handler_count) {
  HStateMap m;
  if (s == HState::S) return m;
  m.entries_.reserve(handler_count);
  for (HandlerId h = 0; h < handler_count; ++h) m.entries_.emplace_back(h, s);
  return m;
}

HState HStateMap::get(HandlerId h) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), h,
      [](const Entry& e, HandlerId key) { return e.first < key; });
  if (it != entries_.end() && it->first == h) return it->second;
  return HState::S;
}

void HStateMap::set(HandlerId h, HState s) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), h,
      [](const Entry& e, HandlerId key) { return e.first < key; });
  const bool present = it != entries_.end() && it->first == h;
  if (s == HState::S) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = s;
  } else {
    entries_.insert(it, {h, s});
  }
}

bool HStateMap::any_infeasible() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.second == HState::X; });
}

std::vector<HandlerId> HStateMap::infeasible_handlers() const {
  std::vector<HandlerId> out;
  for (const auto& [h, s] : entries_) {
    if (s == HState::X) out.push_back(h);
  }
  return out;
}

HStateMap hstate_map_meet(const HStateMap& a, const HStateMap& b) {
  HStateMap out;
  merge_walk(a.entries(), b.entries(), HState::S, HState::S,
             [&](HandlerId h, HState x, HState y) {
               out.set(h, hstate_meet(x, y));
             });
  return out;
}

// ---- HandlerMicroFn --------------------------------------------------------

HandlerMicroFn HandlerMicroFn::single(HandlerId h, MicroFn f) {
  HandlerMicroFn out;
  out.set(h, f);
  return out;
}

HandlerMicroFn HandlerMicroFn::uniform(MicroFn f, std::size_t handler_count) {
  HandlerMicroFn out;
  if (f.is_identity()) return out;
  for (HandlerId h = 0; h < handler_count; ++h) out.entries_.emplace_back(h, f);
  return out;
}

MicroFn HandlerMicroFn::get(HandlerId h) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), h,
      [](const Entry& e, HandlerId key) { return e.first < key; });
  if (it != entries_.end() && it->first == h) return it->second;
  return MicroFn::identity();
}

void HandlerMicroFn::set(HandlerId h, MicroFn f) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), h,
      [](const Entry& e, HandlerId key) { return e.first < key; });
  const bool present = it != entries_.end() && it->first == h;
  if (f.is_identity()) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = f;
  } else {
    entries_.insert(it, {h, f});
  }
}

HStateMap hmf_apply(const HandlerMicroFn& f, const HStateMap& m,
                    std::size_t* work) {
  HStateMap out;
  const std::size_t visited =
      merge_walk(f.entries(), m.entries(), MicroFn::identity(), HState::S,
                 [&](HandlerId h, MicroFn fn, HState s) { out.set(h, fn(s)); });
  if (work) *work = visited;
  return out;
}

HandlerMicroFn hmf_compose(const HandlerMicroFn& g, const HandlerMicroFn& f,
                           std::size_t* work) {
  HandlerMicroFn out;
  const std::size_t visited = merge_walk(
      g.entries(), f.entries(), MicroFn::identity(), MicroFn::identity(),
      [&](HandlerId h, MicroFn gf, MicroFn ff) {
        out.set(h, mf_compose(gf, ff));
      });
  if (work) *work = visited;
  return out;
}

HandlerMicroFn hmf_meet(const HandlerMicroFn& f, const HandlerMicroFn& g,
                        std::size_t* work) {
  HandlerMicroFn out;
  const std::size_t visited = merge_walk(
      f.entries(), g.entries(), MicroFn::identity(), MicroFn::identity(),
      [&](HandlerId h, MicroFn a, MicroFn b) { out.set(h, mf_meet(a, b)); });
  if (work) *work = visited;
  return out;
}

bool hmf_equal(const HandlerMicroFn& f, const HandlerMicroFn& g) {
  return f == g;
}

std::string to_string(const HStateMap& m, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << '{';
  for (HandlerId h = 0; h < names.size(); ++h) {
    if (h) os << ", ";
    os << names[h] << ": " << hstate_char(m.get(h));
  }
  os << '}';
  return os.str();
}

std::string to_string(const HandlerMicroFn& f,
                      const std::vector<std::string>& names) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [h, fn] : f.entries()) {
    if (!first) os << ", ";
    first = false;
    os << (h < names.size() ? names[h] : "#" + std::to_string(h)) << ": "
       << to_string(fn);
  }
  os << '}';
  return os.str();
}

}  // namespace evflow
