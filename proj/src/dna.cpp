#include "chp/dna.hpp"

#include "chp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-9;

std::string apply_map(std::string_view s, const std::vector<int>& map) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>('a' + map[static_cast<std::size_t>(c - 'a')]);
    return out;
}

std::string sorted_letters(const BorderSolution& border) {
    std::string s;
    for (int l : border.letter_of_ring) s.push_back(static_cast<char>('a' + l));
    return s;
}

double reflection_offset(int sigma) { return sigma == kCircle ? 0.0 : 2.0 * kPi / sigma; }

}  // namespace

Dna make_dna(const BorderSolution& border, std::string_view letters) {
    std::string expected = sorted_letters(border);
    std::string got(letters);
    std::sort(got.begin(), got.end());
    if (got != expected) {
        throw Error(ErrorCode::InconsistentDna,
                    "letters '" + std::string(letters) + "' are not a permutation of '" + expected + "'");
    }
    const auto blocks = border.block_angles();
    Dna dna;
    dna.letters = std::string(letters);
    for (char c : letters) dna.xi.push_back(blocks[static_cast<std::size_t>(c - 'a')] + kPi / 3.0);
    return dna;
}

Dna dna_from_angles(const BorderSolution& border, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != border.k) {
        throw Error(ErrorCode::InconsistentDna, "expected " + std::to_string(border.k) + " angles");
    }
    const auto blocks = border.block_angles();
    std::string letters;
    for (double x : xi) {
        int found = -1;
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            if (std::abs(x - (blocks[l] + kPi / 3.0)) < kTol) found = static_cast<int>(l);
        }
        if (found < 0) {
            throw Error(ErrorCode::InconsistentDna, "angle " + std::to_string(x) + " is not a building block");
        }
        letters.push_back(static_cast<char>('a' + found));
    }
    Dna dna = make_dna(border, letters);
    dna.xi.assign(xi.begin(), xi.end());
    return dna;
}

Dna reflect_dna(const Dna& dna, int sigma) {
    Dna out;
    out.xi.reserve(dna.xi.size());
    for (double x : dna.xi) out.xi.push_back(kPi - x - reflection_offset(sigma));

    // Rank of each reflected angle among the distinct reflected values.
    std::vector<double> distinct = out.xi;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end(), [](double a, double b) { return std::abs(a - b) < kTol; }),
                   distinct.end());
    for (double x : out.xi) {
        const auto it = std::find_if(distinct.begin(), distinct.end(), [x](double v) { return std::abs(v - x) < kTol; });
        out.letters.push_back(static_cast<char>('a' + (it - distinct.begin())));
    }
    return out;
}

std::vector<std::vector<int>> symmetry_letter_maps(const BorderSolution& border) {
    const int blocks = border.building_blocks();
    std::vector<std::vector<int>> maps;
    for (int shift : border.vertex_shifts) maps.push_back(shift_letter_map(border, shift));
    const std::size_t rotations = maps.size();
    for (std::size_t i = 0; i < rotations; ++i) {
        std::vector<int> m = maps[i];
        for (int& l : m) l = blocks - 1 - l;
        maps.push_back(std::move(m));
    }
    return maps;
}

CanonicalDna canonicalize_dna(const Dna& dna, const BorderSolution& border) {
    if (static_cast<int>(dna.xi.size()) != border.k || static_cast<int>(dna.letters.size()) != border.k) {
        throw Error(ErrorCode::InconsistentDna, "DNA length does not match k");
    }
    // Multiset check {xi} == {phi + pi/3}.
    std::vector<double> a = dna.xi;
    std::vector<double> b = border.phi;
    for (double& x : b) x += kPi / 3.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > kTol) {
            throw Error(ErrorCode::InconsistentDna,
                        "xi multiset differs from phi + pi/3 (violates the permutation property)");
        }
    }

    const auto maps = symmetry_letter_maps(border);
    const std::size_t rotations = maps.size() / 2;
    std::string best = dna.letters;
    const std::string mirrored = apply_map(dna.letters, maps[rotations]);
    bool mirror_in_rotations = false;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string image = apply_map(dna.letters, maps[i]);
        if (image < best) best = image;
        if (i < rotations && image == mirrored) mirror_in_rotations = true;
    }
    return {make_dna(border, best), mirror_in_rotations};
}

std::vector<Dna> enumerate_dnas(const BorderSolution& border, std::size_t cap) {
    const BigInt count = count_configurations(count_input(border));
    if (count > BigInt(cap)) {
        throw Error(ErrorCode::CapExceeded, "configuration count " + count.str() + " exceeds cap " + std::to_string(cap));
    }
    const auto maps = symmetry_letter_maps(border);
    std::vector<Dna> out;
    std::string s = sorted_letters(border);
    do {
        bool minimal = true;
        for (const auto& m : maps) {
            if (apply_map(s, m) < s) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(make_dna(border, s));
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

std::vector<Dna> enumerate_dnas(int sigma, int k, std::size_t cap) { return enumerate_dnas(solve_border(sigma, k), cap); }

BigInt count_configurations(const CountInput& input) {
    int total = 0;
    for (int n : input.degeneracies) total += n;
    if (input.k < 1 || total != input.k || input.n_vertices < 1 || (input.eta != 1 && input.eta != 2)) {
        throw Error(ErrorCode::PreconditionViolated, "degeneracies must sum to k; eta in {1,2}; n_V >= 1");
    }
    auto factorial = [](int n) {
        BigInt f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    const BigInt numerator = factorial(input.k);
    BigInt denominator = BigInt(input.eta) * input.n_vertices;
    for (int n : input.degeneracies) denominator *= factorial(n);
    if (numerator < denominator) return 1;
    return numerator / denominator;
}

CountInput count_input(const BorderSolution& border) {
    return {border.k, border.eta, border.n_vertices, border.degeneracies};
}

BigInt count_configurations_circle(int k) { return count_configurations(count_input(solve_border(kCircle, k))); }

}  // namespace chp
