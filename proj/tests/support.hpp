#pragma once

#include <gtest/gtest.h>

#include "zkfaith/group.hpp"

namespace zkfaith::test {

inline Scalar S(const PublicParams& pp, long long v) { return Scalar::from_int(pp.group(), v); }

// Exponent of a mock element as an integer.
template <class E>
unsigned long ex(const E& e) {
    return e.exponent().value().to_ulong();
}

inline PublicParams curve() { return setup(SecurityLevel::standard, Backend::curve); }
// Large mock order: random scalars essentially never collide.
inline PublicParams mock_big() { return setup(SecurityLevel::standard, Backend::mock); }

inline Bytes ctx_bytes(std::string_view s) { return to_bytes(s); }

class BackendTest : public ::testing::TestWithParam<Backend> {
protected:
    PublicParams pp = setup(SecurityLevel::standard, GetParam());
    bool is_curve() const { return GetParam() == Backend::curve; }
    // Trial counts: full on the mock, reduced on the curve to keep the
    // unit suite quick. The acceptance binary runs the full counts.
    int trials(int mock, int on_curve) const { return is_curve() ? on_curve : mock; }
};

inline std::string backend_name(const ::testing::TestParamInfo<Backend>& info) {
    return std::string(to_string(info.param));
}

}  // namespace zkfaith::test

#define ZK_BOTH_BACKENDS(Suite) \
    INSTANTIATE_TEST_SUITE_P(Backends, Suite, ::testing::Values(Backend::mock, Backend::curve), test::backend_name)
