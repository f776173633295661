#pragma once
// Layouted binary strings: n coordinate pairs (x_i, y_i) followed by t extra
// coordinates, packed into 64-bit words with popcount-based Hamming distance.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace medz {

// Input problems (bad files, mismatched layouts, invalid parameters).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Size-guard refusals (the request is well-formed but too large to run).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Layout {
    int n_pairs = 0;
    long long t_extra = 0;

    long long length() const { return 2LL * n_pairs + t_extra; }
    bool operator==(const Layout& o) const {
        return n_pairs == o.n_pairs && t_extra == o.t_extra;
    }
    bool operator!=(const Layout& o) const { return !(*this == o); }
};

class BitString {
public:
    BitString() = default;
    explicit BitString(Layout lay)
        : lay_(lay), words_((static_cast<size_t>(lay.length()) + 63) / 64, 0) {}

    static BitString from_string(Layout lay, const std::string& bits);

    const Layout& layout() const { return lay_; }
    long long size() const { return lay_.length(); }

    bool get(long long i) const {
        return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    }
    void set(long long i, bool v) {
        uint64_t mask = 1ULL << (i & 63);
        if (v)
            words_[static_cast<size_t>(i) >> 6] |= mask;
        else
            words_[static_cast<size_t>(i) >> 6] &= ~mask;
    }
    void flip(long long i) { words_[static_cast<size_t>(i) >> 6] ^= 1ULL << (i & 63); }

    long long popcount() const;
    std::string to_string() const;

    bool operator==(const BitString& o) const {
        return lay_ == o.lay_ && words_ == o.words_;
    }
    bool operator!=(const BitString& o) const { return !(*this == o); }
    bool operator<(const BitString& o) const;  // lexicographic on coordinates

    const std::vector<uint64_t>& words() const { return words_; }

private:
    Layout lay_{};
    std::vector<uint64_t> words_;
};

long long hamming(const BitString& a, const BitString& b);

// Flip the 2*n_pairs pair coordinates, leave extras unchanged.
BitString complement_on_pairs(const BitString& s);

// One string of a blueprint: values on the 2n pair coordinates (bit j of
// pair_bits is coordinate j in the order x_1,y_1,x_2,y_2,...), a count of
// additional ones among the extras, and a multiplicity.
struct BlueprintString {
    uint64_t pair_bits = 0;
    long long extras = 0;
    long long copies = 1;
    std::string tag;
};

struct StringBlueprint {
    int n_pairs = 0;
    std::vector<BlueprintString> strings;

    long long total_extras() const;
    long long total_strings() const;
};

struct StringMultiset {
    Layout layout;
    std::vector<BitString> members;  // duplicates stored explicitly
};

// Turn a blueprint into concrete strings. Extras are packed deterministically
// left to right in string order (copies expanded in order), so every extra
// coordinate carries at most one 1 across the multiset. If t_extra < 0 the
// layout gets exactly the number of extras the blueprint consumes.
StringMultiset materialize(const StringBlueprint& bp, long long t_extra = -1);

// Text format A: one raw 0/1 line per string; the pair/extra split is
// supplied externally via n_pairs (extras are whatever follows the pairs).
StringMultiset load_format_a(std::istream& in, int n_pairs);

// Text format B: one line "<2n pair bits> +<e>" per string; materialization
// is applied on load.
StringMultiset load_format_b(std::istream& in);
StringBlueprint parse_format_b(std::istream& in);
void save_format_b(std::ostream& out, const StringBlueprint& bp);

}  // namespace medz
