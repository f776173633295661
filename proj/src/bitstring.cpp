#include "medz/bitstring.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace medz {

BitString BitString::from_string(Layout lay, const std::string& bits) {
    if (static_cast<long long>(bits.size()) != lay.length())
        throw InputError("bit string length " + std::to_string(bits.size()) +
                         " does not match layout length " +
                         std::to_string(lay.length()));
    BitString s(lay);
    for (long long i = 0; i < lay.length(); ++i) {
        char c = bits[static_cast<size_t>(i)];
        if (c == '1')
            s.set(i, true);
        else if (c != '0')
            throw InputError("invalid character in bit string: " + std::string(1, c));
    }
    return s;
}

long long BitString::popcount() const {
    long long total = 0;
    for (uint64_t w : words_) total += std::popcount(w);
    return total;
}

std::string BitString::to_string() const {
    std::string out(static_cast<size_t>(size()), '0');
    for (long long i = 0; i < size(); ++i)
        if (get(i)) out[static_cast<size_t>(i)] = '1';
    return out;
}

bool BitString::operator<(const BitString& o) const {
    if (lay_.length() != o.lay_.length()) return lay_.length() < o.lay_.length();
    for (long long i = 0; i < size(); ++i) {
        bool a = get(i), b = o.get(i);
        if (a != b) return b;
    }
    return false;
}

long long hamming(const BitString& a, const BitString& b) {
    if (a.layout() != b.layout())
        throw InputError("hamming: layout mismatch");
    long long total = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (size_t i = 0; i < wa.size(); ++i) total += std::popcount(wa[i] ^ wb[i]);
    return total;
}

BitString complement_on_pairs(const BitString& s) {
    BitString out = s;
    for (long long i = 0; i < 2LL * s.layout().n_pairs; ++i) out.flip(i);
    return out;
}

long long StringBlueprint::total_extras() const {
    long long total = 0;
    for (const auto& b : strings) total += b.extras * b.copies;
    return total;
}

long long StringBlueprint::total_strings() const {
    long long total = 0;
    for (const auto& b : strings) total += b.copies;
    return total;
}

StringMultiset materialize(const StringBlueprint& bp, long long t_extra) {
    long long need = bp.total_extras();
    if (t_extra < 0) t_extra = need;
    if (need > t_extra)
        throw InputError("materialize: blueprint needs " + std::to_string(need) +
                         " extras but layout provides " + std::to_string(t_extra));
    if (bp.n_pairs < 0 || bp.n_pairs > 32)
        throw InputError("materialize: n_pairs must be in [0, 32]");

    Layout lay{bp.n_pairs, t_extra};
    StringMultiset out;
    out.layout = lay;
    long long cursor = 2LL * bp.n_pairs;  // next free extra coordinate
    for (const auto& b : bp.strings) {
        for (long long c = 0; c < b.copies; ++c) {
            BitString s(lay);
            for (int j = 0; j < 2 * bp.n_pairs; ++j)
                if ((b.pair_bits >> j) & 1u) s.set(j, true);
            for (long long e = 0; e < b.extras; ++e) s.set(cursor++, true);
            out.members.push_back(std::move(s));
        }
    }
    return out;
}

StringMultiset load_format_a(std::istream& in, int n_pairs) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw InputError("format A: no strings");
    long long len = static_cast<long long>(lines[0].size());
    if (2LL * n_pairs > len)
        throw InputError("format A: 2*n_pairs exceeds string length");
    Layout lay{n_pairs, len - 2LL * n_pairs};
    StringMultiset out;
    out.layout = lay;
    for (const auto& l : lines) {
        if (static_cast<long long>(l.size()) != len)
            throw InputError("format A: unequal string lengths");
        out.members.push_back(BitString::from_string(lay, l));
    }
    return out;
}

StringBlueprint parse_format_b(std::istream& in) {
    StringBlueprint bp;
    std::string line;
    int line_no = 0;
    long long width = -1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string bits, plus;
        ls >> bits >> plus;
        if (bits.empty() || plus.size() < 2 || plus[0] != '+')
            throw InputError("format B line " + std::to_string(line_no) +
                             ": expected '<pair bits> +<extras>'");
        if (width < 0) {
            width = static_cast<long long>(bits.size());
            if (width % 2 != 0 || width > 64)
                throw InputError("format B: pair field must have even length <= 64");
            bp.n_pairs = static_cast<int>(width / 2);
        } else if (static_cast<long long>(bits.size()) != width) {
            throw InputError("format B: inconsistent pair-field widths");
        }
        BlueprintString s;
        for (long long j = 0; j < width; ++j) {
            char c = bits[static_cast<size_t>(j)];
            if (c == '1')
                s.pair_bits |= 1ULL << j;
            else if (c != '0')
                throw InputError("format B: invalid pair bit");
        }
        try {
            s.extras = std::stoll(plus.substr(1));
        } catch (const std::exception&) {
            throw InputError("format B: invalid extras count '" + plus + "'");
        }
        if (s.extras < 0) throw InputError("format B: negative extras");
        bp.strings.push_back(s);
    }
    if (bp.strings.empty()) throw InputError("format B: no strings");
    return bp;
}

StringMultiset load_format_b(std::istream& in) { return materialize(parse_format_b(in)); }

void save_format_b(std::ostream& out, const StringBlueprint& bp) {
    for (const auto& b : bp.strings) {
        std::string bits(static_cast<size_t>(2 * bp.n_pairs), '0');
        for (int j = 0; j < 2 * bp.n_pairs; ++j)
            if ((b.pair_bits >> j) & 1u) bits[static_cast<size_t>(j)] = '1';
        for (long long c = 0; c < b.copies; ++c)
            out << bits << " +" << b.extras << "\n";
    }
}

}  // namespace medz
