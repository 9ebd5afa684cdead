#include <doctest.h>

#include <cstring>
#include <deque>
#include <random>

#include "agrione/sdi12.hpp"

using namespace agrione;
using namespace agrione::sdi12;

namespace {

// Replays canned replies and records what it was sent.
class ScriptedPort : public SensorPort {
public:
    std::deque<std::optional<Reply>> replies;
    std::vector<std::string> sent;
    double waited = 0.0;

    std::optional<Reply> transact(std::string_view command) override {
        sent.emplace_back(command);
        if (replies.empty()) {
            return std::nullopt;
        }
        auto r = replies.front();
        replies.pop_front();
        return r;
    }
    void wait(double s) override { waited += s; }
};

SensorPort::Reply reply(std::string bytes, double latency = 0.01) {
    return SensorPort::Reply{std::move(bytes), latency};
}

} // namespace

TEST_CASE("addresses accept only alphanumerics") {
    CHECK(Address('0').value() == '0');
    CHECK(Address('z').value() == 'z');
    CHECK(Address('Q').value() == 'Q');
    CHECK_THROWS_AS(Address('?'), RangeError);
    CHECK_THROWS_AS(Address(' '), RangeError);
}

TEST_CASE("encode_command grammar") {
    CHECK(encode_command(Command::start_measurement(Address('0'))) == "0M!");
    CHECK(encode_command(Command::send_data(Address('0'), 0)) == "0D0!");
    CHECK(encode_command(Command::address_query()) == "?!");
    CHECK(encode_command(Command::acknowledge(Address('3'))) == "3!");
    CHECK(encode_command(Command::identify(Address('a'))) == "aI!");
    CHECK(encode_command(Command::send_data(Address('b'), 9)) == "bD9!");
    CHECK_THROWS_AS(Command::send_data(Address('0'), 10), RangeError);
}

TEST_CASE("parse_command rejects unsupported frames") {
    CHECK_THROWS_AS(parse_command("0M"), FrameError);
    CHECK_THROWS_AS(parse_command("0C!"), FrameError);
    CHECK_THROWS_AS(parse_command("0D!"), FrameError);
    CHECK_THROWS_AS(parse_command("0D12!"), FrameError);
    CHECK_THROWS_AS(parse_command("!"), FrameError);
    CHECK(parse_command("0D7!") == Command::send_data(Address('0'), 7));
}

TEST_CASE("parse_measure_ack") {
    CHECK(parse_measure_ack("00013\r\n") == MeasureAck{Address('0'), 1, 3});
    CHECK(parse_measure_ack("10000\r\n") == MeasureAck{Address('1'), 0, 0});
    CHECK(parse_measure_ack("z9999\r\n") == MeasureAck{Address('z'), 999, 9});

    SUBCASE("non-digit in delay") {
        try {
            parse_measure_ack("0A013\r\n");
            FAIL("expected FrameError");
        } catch (const FrameError& e) {
            CHECK(e.position() == 1);
        }
    }
    CHECK_THROWS_AS(parse_measure_ack("0001\r\n"), FrameError);
    CHECK_THROWS_AS(parse_measure_ack("000130\r"), FrameError);
    CHECK_THROWS_AS(parse_measure_ack("0001X\r\n"), FrameError);
    CHECK_THROWS_AS(parse_measure_ack("?0013\r\n"), FrameError);
}

TEST_CASE("parse_data_response") {
    auto r = parse_data_response("0+2450.5+24.3+150\r\n");
    CHECK(r.address == Address('0'));
    CHECK(r.values == std::vector<double>{2450.5, 24.3, 150.0});

    CHECK(parse_data_response("0\r\n").values.empty());
    CHECK(parse_data_response("0+1793.25-0.5+0\r\n").values ==
          std::vector<double>{1793.25, -0.5, 0.0});

    CHECK_THROWS_AS(parse_data_response("02450.5\r\n"), FrameError);    // missing sign
    CHECK_THROWS_AS(parse_data_response("0+\r\n"), FrameError);         // empty token
    CHECK_THROWS_AS(parse_data_response("0+1.2.3\r\n"), FrameError);    // two dots
    CHECK_THROWS_AS(parse_data_response("0+.\r\n"), FrameError);        // no digits
    CHECK_THROWS_AS(parse_data_response("0+1e5\r\n"), FrameError);      // exponent
    CHECK_THROWS_AS(parse_data_response("0+1+2\n"), FrameError);        // bare LF
    CHECK_THROWS_AS(parse_data_response("0+1+2+3+4+5+6+7+8+9+10\r\n"), FrameError);
}

TEST_CASE("decode_reading maps RAW, temperature, EC") {
    const DataResponse resp{Address('0'), {2450.5, 24.3, 150.0}};
    CHECK(decode_reading(resp) == RawReading{2450.5, 24.3, 150.0});
    CHECK_THROWS_AS(decode_reading(DataResponse{Address('0'), {2450.5, 24.3}}), ShapeError);
    CHECK_THROWS_AS(decode_reading(DataResponse{Address('0'), {-5.0, 24.3, 150.0}}), RangeError);
    CHECK_THROWS_AS(decode_reading(DataResponse{Address('0'), {100.0, 61.0, 150.0}}), RangeError);
    CHECK_THROWS_AS(decode_reading(DataResponse{Address('0'), {100.0, 20.0, -1.0}}), RangeError);
}

TEST_CASE("encoders reject values the wire cannot carry") {
    CHECK_THROWS_AS(encode_data_response({Address('0'), std::vector<double>(10, 1.0)}), RangeError);
    CHECK_THROWS_AS(encode_data_response({Address('0'), {std::nan("")}}), RangeError);
    CHECK_THROWS_AS(encode_measure_ack({Address('0'), 1000, 1}), RangeError);
    CHECK(encode_data_response({Address('0'), {-0.0, 0.0}}) == "0-0+0\r\n");
}

TEST_CASE("round trip over generated frames") {
    std::mt19937_64 rng(12345);
    const std::string alphabet =
        "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    auto any_address = [&] { return Address(alphabet[rng() % alphabet.size()]); };
    auto any_value = [&]() -> double {
        switch (rng() % 3) {
        case 0: return static_cast<double>(static_cast<std::int64_t>(rng() % 2000001) - 1000000);
        case 1: {
            const double scale = std::pow(10.0, static_cast<double>(rng() % 5));
            return static_cast<double>(static_cast<std::int64_t>(rng() % 20000001) - 10000000) / scale;
        }
        default: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
        }
    };

    for (int i = 0; i < 2000; ++i) {
        const Address a = any_address();
        const Command cmds[] = {Command::address_query(), Command::acknowledge(a),
                                Command::identify(a), Command::start_measurement(a),
                                Command::send_data(a, static_cast<int>(rng() % 10))};
        for (const auto& c : cmds) {
            const auto bytes = encode_command(c);
            REQUIRE(parse_command(bytes) == c);
            REQUIRE(encode_command(parse_command(bytes)) == bytes);
        }

        const MeasureAck ack{a, static_cast<int>(rng() % 1000), static_cast<int>(rng() % 10)};
        REQUIRE(parse_measure_ack(encode_measure_ack(ack)) == ack);

        DataResponse data{a, {}};
        const std::size_t n = rng() % (kMaxValuesPerFrame + 1);
        for (std::size_t k = 0; k < n; ++k) {
            data.values.push_back(any_value());
        }
        const auto wire = encode_data_response(data);
        const auto back = parse_data_response(wire);
        REQUIRE(back.address == data.address);
        REQUIRE(back.values.size() == data.values.size());
        for (std::size_t k = 0; k < n; ++k) {
            REQUIRE(std::memcmp(&back.values[k], &data.values[k], sizeof(double)) == 0);
        }
        REQUIRE(encode_data_response(back) == wire);
    }
}

TEST_CASE("parsers are total on arbitrary bytes") {
    std::mt19937_64 rng(99);
    const std::string biased = "0123456789+-.!?\r\naDMI";
    for (int i = 0; i < 20000; ++i) {
        std::string s(rng() % 16, '\0');
        for (char& c : s) {
            c = (rng() % 2) ? biased[rng() % biased.size()] : static_cast<char>(rng() % 256);
        }
        for (auto parse : {+[](std::string_view b) { (void)parse_command(b); },
                           +[](std::string_view b) { (void)parse_measure_ack(b); },
                           +[](std::string_view b) { (void)parse_data_response(b); },
                           +[](std::string_view b) { (void)parse_address_reply(b); }}) {
            try {
                parse(s);
            } catch (const agrione::Error&) {
            }
        }
    }
}

TEST_CASE("run_transaction issues one measure and one data command") {
    ScriptedPort port;
    port.replies = {reply("00013\r\n"), reply("0+2450.5+24.3+150\r\n")};
    const auto r = run_transaction(port, Address('0'));
    CHECK(r == RawReading{2450.5, 24.3, 150.0});
    CHECK(port.sent == std::vector<std::string>{"0M!", "0D0!"});
    CHECK(port.waited == doctest::Approx(1.0));
}

TEST_CASE("run_transaction error paths") {
    SUBCASE("silent sensor times out") {
        ScriptedPort port;
        CHECK_THROWS_AS(run_transaction(port, Address('0')), TimeoutError);
        CHECK(port.sent.size() == 1);
    }
    SUBCASE("slow acknowledgement") {
        ScriptedPort port;
        port.replies = {reply("00013\r\n", 1.5)};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), TimeoutError);
    }
    SUBCASE("data past the default deadline of 2 * delay + 1") {
        ScriptedPort port;
        port.replies = {reply("00023\r\n", 0.5), reply("0+1+2+3\r\n", 4.6)};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), TimeoutError);
    }
    SUBCASE("configured deadline") {
        ScriptedPort port;
        port.replies = {reply("00013\r\n", 0.1), reply("0+1+2+3\r\n", 0.1)};
        CHECK_THROWS_AS(run_transaction(port, Address('0'), {.deadline_s = 1.0}), TimeoutError);
    }
    SUBCASE("garbled data") {
        ScriptedPort port;
        port.replies = {reply("00013\r\n"), reply("0+24x0+1+2\r\n")};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), FrameError);
        CHECK(port.sent.size() == 2);
    }
    SUBCASE("count disagrees with acknowledgement") {
        ScriptedPort port;
        port.replies = {reply("00013\r\n"), reply("0+1+2\r\n")};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), ShapeError);
    }
    SUBCASE("reply from another address") {
        ScriptedPort port;
        port.replies = {reply("10013\r\n")};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), FrameError);
    }
    SUBCASE("out of range reading") {
        ScriptedPort port;
        port.replies = {reply("00013\r\n"), reply("0-3+20+1\r\n")};
        CHECK_THROWS_AS(run_transaction(port, Address('0')), RangeError);
    }
}
