#include "tiltlab/sequence.hpp"

#include <cctype>

namespace tiltlab {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > kMaxFlattenedLength || b > kMaxFlattenedLength ||
        a + b > kMaxFlattenedLength)
        throw std::length_error("tilt sequence expands past the flatten guard");
    return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMaxFlattenedLength / a)
        throw std::length_error("tilt sequence expands past the flatten guard");
    std::uint64_t r = a * b;
    if (r > kMaxFlattenedLength)
        throw std::length_error("tilt sequence expands past the flatten guard");
    return r;
}

}  // namespace

std::uint64_t TiltSequence::length() const {
    std::uint64_t total = 0;
    for (const SequenceAtom& atom : atoms) {
        if (atom.is_group)
            total = checked_add(total, checked_mul(atom.group->length(), atom.repeat));
        else
            total = checked_add(total, 1);
    }
    return total;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    TiltSequence parse() {
        TiltSequence seq = parse_seq(/*top_level=*/true);
        skip_ignorable();
        if (pos_ < text_.size())
            fail("unexpected character");
        return seq;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SequenceParseError(what + " at byte " + std::to_string(pos_), pos_);
    }

    bool starts_with(std::string_view s) const {
        return text_.substr(pos_, s.size()) == s;
    }

    void skip_ignorable() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ',' || c == '<' || c == '>' ||
                std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (starts_with("\xe2\x9f\xa8") || starts_with("\xe2\x9f\xa9")) {
                pos_ += 3;  // U+27E8 / U+27E9 mathematical angle brackets
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    TiltSequence parse_seq(bool top_level) {
        TiltSequence seq;
        while (true) {
            skip_ignorable();
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            if (c == ')') {
                if (top_level) fail("unmatched ')'");
                break;
            }
            if (c == '(') {
                ++pos_;
                SequenceAtom atom;
                atom.is_group = true;
                atom.group = std::make_shared<TiltSequence>(parse_seq(false));
                skip_ignorable();
                if (pos_ >= text_.size() || text_[pos_] != ')')
                    fail("unclosed '('");
                ++pos_;
                skip_ignorable();
                if (pos_ < text_.size() && text_[pos_] == '^') {
                    ++pos_;
                    skip_ignorable();
                    atom.repeat = parse_uint();
                }
                seq.atoms.push_back(std::move(atom));
                continue;
            }
            if (auto d = direction_from_char(c)) {
                ++pos_;
                SequenceAtom atom;
                atom.dir = *d;
                seq.atoms.push_back(atom);
                continue;
            }
            fail("unexpected character");
        }
        if (seq.atoms.empty()) {
            if (top_level) fail("empty sequence");
            fail("empty group");
        }
        return seq;
    }

    std::uint64_t parse_uint() {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected repeat count after '^'");
        std::uint64_t value = 0;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            int digit = text_[pos_] - '0';
            if (value > (UINT64_MAX - digit) / 10) fail("repeat count overflows");
            value = value * 10 + digit;
            ++pos_;
        }
        return value;
    }
};

void serialize_into(const TiltSequence& seq, std::string& out) {
    bool first = true;
    for (const SequenceAtom& atom : seq.atoms) {
        if (!first) out += ',';
        first = false;
        if (atom.is_group) {
            out += '(';
            serialize_into(*atom.group, out);
            out += ')';
            if (atom.repeat != 1) {
                out += '^';
                out += std::to_string(atom.repeat);
            }
        } else {
            out += to_char(atom.dir);
        }
    }
}

}  // namespace

TiltSequence parse_sequence(std::string_view text) { return Parser(text).parse(); }

std::string serialize_sequence(const TiltSequence& seq) {
    std::string out;
    serialize_into(seq, out);
    return out;
}

namespace {

void flatten_into(const TiltSequence& seq, std::vector<Direction>& out) {
    for (const SequenceAtom& atom : seq.atoms) {
        if (atom.is_group) {
            for (std::uint64_t i = 0; i < atom.repeat; ++i)
                flatten_into(*atom.group, out);
        } else {
            out.push_back(atom.dir);
        }
    }
}

}  // namespace

std::vector<Direction> flatten(const TiltSequence& seq) {
    std::uint64_t len = seq.length();  // throws past the guard
    std::vector<Direction> out;
    out.reserve(len);
    flatten_into(seq, out);
    return out;
}

Configuration apply_sequence(const Configuration& config,
                             const std::vector<Direction>& dirs) {
    Configuration current = config;
    for (Direction d : dirs) current = tilt(current, d);
    return current;
}

Configuration apply_sequence(const Configuration& config, const TiltSequence& seq) {
    Configuration current = config;
    for (const SequenceAtom& atom : seq.atoms) {
        if (!atom.is_group) {
            current = tilt(current, atom.dir);
            continue;
        }
        for (std::uint64_t i = 0; i < atom.repeat; ++i) {
            Configuration next = apply_sequence(current, *atom.group);
            bool fixed = same_configuration(next, current);
            current = std::move(next);
            if (fixed) break;  // idempotent group: further repeats are no-ops
        }
    }
    return current;
}

TiltSequence seq_of(std::initializer_list<Direction> dirs) {
    TiltSequence seq;
    for (Direction d : dirs) {
        SequenceAtom atom;
        atom.dir = d;
        seq.atoms.push_back(atom);
    }
    return seq;
}

TiltSequence seq_concat(const TiltSequence& a, const TiltSequence& b) {
    TiltSequence out = a;
    out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
    return out;
}

TiltSequence seq_repeat(const TiltSequence& body, std::uint64_t count) {
    TiltSequence out;
    if (count == 0 || body.atoms.empty()) return out;
    SequenceAtom atom;
    atom.is_group = true;
    atom.group = std::make_shared<TiltSequence>(body);
    atom.repeat = count;
    out.atoms.push_back(std::move(atom));
    return out;
}

void seq_append(TiltSequence& seq, Direction d) {
    SequenceAtom atom;
    atom.dir = d;
    seq.atoms.push_back(atom);
}

void seq_append(TiltSequence& seq, const TiltSequence& tail) {
    seq.atoms.insert(seq.atoms.end(), tail.atoms.begin(), tail.atoms.end());
}

}  // namespace tiltlab
