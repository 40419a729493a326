#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tiltlab/core.hpp"

namespace tiltlab {

// A tilt sequence stored as written: a list of atoms, each either a single
// direction or a parenthesized subsequence with a repeat count. Kept in tree
// form so that compiled output like (E,S,W,N,W,S)^12 serializes compactly.
struct TiltSequence;
using SequencePtr = std::shared_ptr<const TiltSequence>;

struct SequenceAtom {
    // Exactly one of the two forms: a direction, or group^repeat.
    bool is_group = false;
    Direction dir = Direction::N;
    SequencePtr group;
    std::uint64_t repeat = 1;
};

struct TiltSequence {
    std::vector<SequenceAtom> atoms;

    // Flattened length, computed without expanding. Throws std::length_error
    // past the expansion guard.
    std::uint64_t length() const;

    bool empty() const { return atoms.empty(); }
};

// Largest sequence flatten() will expand.
inline constexpr std::uint64_t kMaxFlattenedLength = 100'000'000;

struct SequenceParseError : std::runtime_error {
    std::size_t offset;  // byte offset of the offending character
    SequenceParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset(offset) {}
};

// Grammar: SEQ := ATOM+ ; ATOM := DIR | '(' SEQ ')' [ '^' UINT ].
// Direction letters are case-insensitive. Commas, whitespace, and angle
// brackets (ASCII <> or the UTF-8 pair) are ignored; '#' starts a comment
// that runs to end of line. Anything else raises SequenceParseError with the
// byte offset.
TiltSequence parse_sequence(std::string_view text);

// Compact text form: plain letters with comma separators, groups as
// (...)^k. Parsing the output reproduces the tree.
std::string serialize_sequence(const TiltSequence& seq);

std::vector<Direction> flatten(const TiltSequence& seq);

// Repeated tilt. Walks the tree without flattening so that huge repeat
// counts of idempotent groups still terminate quickly: a group whose
// application leaves the configuration unchanged is applied once.
Configuration apply_sequence(const Configuration& config, const TiltSequence& seq);
Configuration apply_sequence(const Configuration& config,
                             const std::vector<Direction>& dirs);

// Convenience builders for programmatic construction.
TiltSequence seq_of(std::initializer_list<Direction> dirs);
TiltSequence seq_concat(const TiltSequence& a, const TiltSequence& b);
TiltSequence seq_repeat(const TiltSequence& body, std::uint64_t count);
void seq_append(TiltSequence& seq, Direction d);
void seq_append(TiltSequence& seq, const TiltSequence& tail);

}  // namespace tiltlab
