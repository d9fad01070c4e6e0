#pragma once

// Event-handler state lattice and the micro-function algebra over it.
//
// A single handler moves through S (not registered) -> R (registered, event
// not yet emitted) -> E (registered and emitted). X marks an infeasible
// ordering seen on an abstract path. The chain is ordered X > S > R > E and
// merge points take the minimum.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace evflow {

using HandlerId = std::uint32_t;

// Encoded so that the lattice meet is unsigned min of the 2-bit code.
enum class HState : std::uint8_t { E = 0b00, R = 0b01, S = 0b10, X = 0b11 };

inline constexpr std::array<HState, 4> kAllStates = {HState::X, HState::S,
                                                     HState::R, HState::E};

constexpr HState hstate_meet(HState a, HState b) {
  return static_cast<std::uint8_t>(a) < static_cast<std::uint8_t>(b) ? a : b;
}

/// a is above-or-equal b in the chain (a ⊒ b).
constexpr bool hstate_geq(HState a, HState b) {
  return static_cast<std::uint8_t>(a) >= static_cast<std::uint8_t>(b);
}

char hstate_char(HState s);

/// A total function over the four-element chain, packed two bits per input.
/// The image of input s lives at bit offset 2 * code(s), so the byte reads
/// <f(X), f(S), f(R), f(E)> from the high bits down.
class MicroFn {
 public:
  constexpr MicroFn() : bits_(0xE4) {}
  constexpr explicit MicroFn(std::uint8_t bits) : bits_(bits) {}
  static constexpr MicroFn from_table(HState fx, HState fs, HState fr,
                                      HState fe) {
    return MicroFn(static_cast<std::uint8_t>(
        (static_cast<unsigned>(fx) << 6) | (static_cast<unsigned>(fs) << 4) |
        (static_cast<unsigned>(fr) << 2) | static_cast<unsigned>(fe)));
  }

  static constexpr MicroFn identity() { return MicroFn(0xE4); }
  static constexpr MicroFn top() { return MicroFn(0xFF); }
  static constexpr MicroFn register_fn() {
    return from_table(HState::X, HState::R, HState::R, HState::E);
  }
  static constexpr MicroFn emit_fn() {
    return from_table(HState::X, HState::S, HState::E, HState::E);
  }
  static constexpr MicroFn invoke_fn() {
    return from_table(HState::X, HState::X, HState::X, HState::E);
  }

  constexpr HState operator()(HState s) const {
    return static_cast<HState>((bits_ >> (2 * static_cast<unsigned>(s))) & 3u);
  }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool is_identity() const { return bits_ == 0xE4; }

  friend constexpr bool operator==(MicroFn, MicroFn) = default;

 private:
  std::uint8_t bits_;
};

HState mf_apply(MicroFn f, HState s);
/// g ∘ f: apply f first.
MicroFn mf_compose(MicroFn g, MicroFn f);
MicroFn mf_meet(MicroFn f, MicroFn g);

// Definitional versions that never touch the precomputed tables.
MicroFn mf_compose_direct(MicroFn g, MicroFn f);
MicroFn mf_meet_direct(MicroFn f, MicroFn g);

/// Rebuilds the 256x256 tables from the definitions and compares them with
/// the ones in use. Returns the number of mismatching entries.
std::size_t verify_micro_tables();

bool mf_is_monotone(MicroFn f);

/// Renders "<X,S,R,E>-><f(X),f(S),f(R),f(E)>".
std::string to_string(MicroFn f);

/// Map from handler to state. Handlers not listed are in S.
class HStateMap {
 public:
  using Entry = std::pair<HandlerId, HState>;

  HStateMap() = default;

  static HStateMap all(HState s, std::size_t handler_count);

  HState get(HandlerId h) const;
  void set(HandlerId h, HState s);
  const std::vector<Entry>& entries() const { return entries_; }
  bool any_infeasible() const;
  std::vector<HandlerId> infeasible_handlers() const;

  friend bool operator==(const HStateMap&, const HStateMap&) = default;

 private:
  std::vector<Entry> entries_;  // sorted by handler, never holds S
};

HStateMap hstate_map_meet(const HStateMap& a, const HStateMap& b);

/// Separable transformer over H -> L, stored as one MicroFn per handler.
/// Handlers not listed map through the identity.
class HandlerMicroFn {
 public:
  using Entry = std::pair<HandlerId, MicroFn>;

  HandlerMicroFn() = default;
  static HandlerMicroFn single(HandlerId h, MicroFn f);
  static HandlerMicroFn uniform(MicroFn f, std::size_t handler_count);

  MicroFn get(HandlerId h) const;
  void set(HandlerId h, MicroFn f);
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool is_identity() const { return entries_.empty(); }

  friend bool operator==(const HandlerMicroFn&, const HandlerMicroFn&) = default;

 private:
  std::vector<Entry> entries_;  // sorted by handler, never holds identity
};

// Optional out-parameter `work` receives the number of handlers visited,
// i.e. the size of the union of the operands' touched handler sets.
HStateMap hmf_apply(const HandlerMicroFn& f, const HStateMap& m,
                    std::size_t* work = nullptr);
HandlerMicroFn hmf_compose(const HandlerMicroFn& g, const HandlerMicroFn& f,
                           std::size_t* work = nullptr);
HandlerMicroFn hmf_meet(const HandlerMicroFn& f, const HandlerMicroFn& g,
                        std::size_t* work = nullptr);
bool hmf_equal(const HandlerMicroFn& f, const HandlerMicroFn& g);

/// "{hdlOpen: E, hdlClose: S}" listing every handler in `names`.
std::string to_string(const HStateMap& m, const std::vector<std::string>& names);
std::string to_string(const HandlerMicroFn& f,
                      const std::vector<std::string>& names);

}  // namespace evflow
