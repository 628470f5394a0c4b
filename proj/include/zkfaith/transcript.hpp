#pragma once

// Fiat-Shamir transcript. Every appended item is labelled and length
// prefixed; the challenge hashes the whole sequence under the domain tag.

#include <string>
#include <string_view>
#include <vector>

#include "zkfaith/group.hpp"

namespace zkfaith {

class Transcript {
public:
    // Binds the parameter digest first, so proofs never transfer between
    // parameter sets.
    Transcript(const PublicParams& pp, std::string_view domain);

    Transcript& append(std::string_view label, std::span<const std::uint8_t> data);
    Transcript& append(std::string_view label, const Scalar& s) { return append(label, s.encode()); }
    Transcript& append(std::string_view label, const G1& p) { return append(label, p.encode()); }
    Transcript& append(std::string_view label, const G2& p) { return append(label, p.encode()); }
    Transcript& append(std::string_view label, const GT& t) { return append(label, t.encode()); }
    Transcript& append_u64(std::string_view label, std::uint64_t v);

    Scalar challenge() const;

private:
    PublicParams pp_;
    std::string domain_;
    std::vector<Bytes> parts_;
};

}  // namespace zkfaith
