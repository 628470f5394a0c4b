#include "zkfaith/transcript.hpp"

namespace zkfaith {

Transcript::Transcript(const PublicParams& pp, std::string_view domain) : pp_(pp), domain_(domain) {
    auto d = pp.digest();
    append("pp", d);
}

Transcript& Transcript::append(std::string_view label, std::span<const std::uint8_t> data) {
    parts_.emplace_back(label.begin(), label.end());
    parts_.emplace_back(data.begin(), data.end());
    return *this;
}

Transcript& Transcript::append_u64(std::string_view label, std::uint64_t v) {
    ByteWriter w;
    w.u64(v);
    return append(label, w.data());
}

Scalar Transcript::challenge() const { return hash_to_scalar(pp_, domain_, parts_); }

}  // namespace zkfaith
