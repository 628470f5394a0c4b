#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>

#include "support.hpp"
#include "zkfaith/commitment.hpp"
#include "zkfaith/errors.hpp"
#include "zkfaith/wire.hpp"

using namespace zkfaith;
namespace fs = std::filesystem;

namespace {

Envelope commitment_envelope(std::uint64_t seed = 1) {
    auto pp = test::mock_big();
    auto vc = vc_setup(pp, 3);
    Rng rng = Rng::from_u64(seed);
    AttributeVector M = {test::S(pp, 1), test::S(pp, 2), test::S(pp, 3)};
    auto [com, op] = vc_commit(vc, M, rng);
    return Envelope::wrap("commitment", com.encode());
}

fs::path scratch(const char* name) {
    auto d = fs::temp_directory_path() / ("zkfaith_wire_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}

}  // namespace

TEST(Wire, RegistryIsConsistent) {
    std::set<std::string_view> names;
    std::set<int> tags;
    for (const auto& t : message_types()) {
        EXPECT_TRUE(names.insert(t.name).second) << t.name;
        if (t.tag) EXPECT_TRUE(tags.insert(t.tag).second) << t.name;
        EXPECT_EQ(&message_type(t.name), &t);
    }
    EXPECT_THROW(message_type("love-letter"), DecodeError);
}

TEST(Wire, EnvelopeRoundTrip) {
    auto e = commitment_envelope();
    auto text = e.to_json();
    EXPECT_EQ(text.find('\n'), std::string::npos);
    auto back = Envelope::from_json(text);
    EXPECT_EQ(back.payload, e.payload);
    EXPECT_EQ(back.role, "wallet");
    EXPECT_EQ(back.to_json(), text);
    // a single trailing newline is what files carry
    EXPECT_NO_THROW(Envelope::from_json(text + "\n"));
    EXPECT_THROW(Envelope::from_json(text + "\n\n"), Error);
    EXPECT_EQ(&back.expect("commitment"), &back.payload);
    EXPECT_THROW(back.expect("signature"), DecodeError);
}

TEST(Wire, WrapChecksHeader) {
    auto e = commitment_envelope();
    EXPECT_THROW(Envelope::wrap("signature", e.payload), UsageError);
    EXPECT_THROW(Envelope::wrap("commitment", {}), UsageError);
}

TEST(Wire, RejectsEachKindOfDamage) {
    auto text = commitment_envelope().to_json();
    auto swap = [&](const std::string& from, const std::string& to) {
        auto t = text;
        auto at = t.find(from);
        EXPECT_NE(at, std::string::npos) << from;
        return t.replace(at, from.size(), to);
    };
    EXPECT_THROW(Envelope::from_json("not json"), DecodeError);
    EXPECT_THROW(Envelope::from_json("[]"), DecodeError);
    EXPECT_THROW(Envelope::from_json(swap("\"version\":1", "\"version\":2")), VersionError);
    EXPECT_THROW(Envelope::from_json(swap("\"version\":1", "\"version\":\"1\"")), DecodeError);
    EXPECT_THROW(Envelope::from_json(swap("\"msg_type\":\"commitment\"", "\"msg_type\":\"sonnet\"")), DecodeError);
    EXPECT_THROW(Envelope::from_json(swap("\"msg_type\":\"commitment\"", "\"msg_type\":\"position-proof\"")),
                 DecodeError);
    EXPECT_THROW(Envelope::from_json(swap("\"role\":\"wallet\"", "\"role\":\"issuer\"")), IntegrityError);
    EXPECT_THROW(Envelope::from_json(swap("{", "{\"extra\":0,")), DecodeError);
    EXPECT_THROW(Envelope::from_json(swap("\"role\"", " \"role\"")), IntegrityError);
    EXPECT_THROW(Envelope::from_json(swap("\"session_id\":\"\"", "\"session_id\":\"00\"")), IntegrityError);

    auto j = text.find("\"digest\":\"") + 10;
    auto t = text;
    t[j] = t[j] == '0' ? '1' : '0';
    EXPECT_THROW(Envelope::from_json(t), IntegrityError);
}

TEST(Wire, EverySingleByteFlipIsCaught) {
    auto text = commitment_envelope(7).to_json();
    for (std::size_t i = 0; i < text.size(); ++i) {
        for (unsigned char x : {0x01, 0x20, 0x80}) {
            auto t = text;
            t[i] = static_cast<char>(t[i] ^ x);
            EXPECT_THROW(Envelope::from_json(t), Error) << "offset " << i << " xor " << int(x);
        }
    }
}

TEST(Wire, Base64Canonical) {
    Rng rng = Rng::from_u64(3);
    for (std::size_t n = 0; n < 70; ++n) {
        Bytes b(n);
        rng.fill(b);
        auto s = base64url_encode(b);
        EXPECT_EQ(s.find_first_of("+/="), std::string::npos);
        EXPECT_EQ(base64url_decode(s), b);
    }
    EXPECT_EQ(base64url_encode(to_bytes("\xfb\xff")), "-_8");
    // "AB" carries nonzero spare bits; "AA" is the canonical spelling of 0x00
    EXPECT_EQ(base64url_decode("AA"), Bytes{0});
    EXPECT_THROW(base64url_decode("AB"), DecodeError);
    EXPECT_THROW(base64url_decode("AA=="), DecodeError);
    EXPECT_THROW(base64url_decode("A+A"), DecodeError);
    EXPECT_THROW(base64url_decode("A"), DecodeError);
}

TEST(Wire, FilesAndLocks) {
    auto p = scratch("com.json");
    auto e = commitment_envelope();
    write_envelope(p, e);
    EXPECT_FALSE(fs::exists(fs::path(p) += ".tmp"));
    EXPECT_EQ(read_envelope(p).payload, e.payload);
    EXPECT_THROW(read_text(scratch("absent.json")), UsageError);

    FileLock held(p);
    ASSERT_TRUE(held.held());
    // flock locks belong to the open file description, so probe from a child
    pid_t pid = ::fork();
    if (pid == 0) {
        FileLock probe(p, false);
        ::_exit(probe.held() ? 1 : 0);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    EXPECT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
    fs::remove_all(p.parent_path());
}
