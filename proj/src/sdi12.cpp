#include "agrione/sdi12.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace agrione::sdi12 {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_sign(char c) { return c == '+' || c == '-'; }

Address address_at(std::string_view bytes, std::size_t pos) {
    if (pos >= bytes.size() || !Address::is_valid(bytes[pos])) {
        throw FrameError("invalid address character", pos);
    }
    return Address(bytes[pos]);
}

// Strips the CR LF terminator, or throws at the offset where it should start.
std::string_view response_body(std::string_view bytes) {
    if (bytes.size() < kResponseTerminator.size() ||
        bytes.substr(bytes.size() - kResponseTerminator.size()) != kResponseTerminator) {
        const std::size_t pos =
            bytes.size() < kResponseTerminator.size() ? bytes.size() : bytes.size() - 2;
        throw FrameError("response not terminated by CR LF", pos);
    }
    return bytes.substr(0, bytes.size() - kResponseTerminator.size());
}

void append_value(std::string& out, double v) {
    if (!std::isfinite(v)) {
        throw RangeError("data values must be finite");
    }
    out.push_back(std::signbit(v) ? '-' : '+');
    std::array<char, 512> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::fabs(v),
                                   std::chars_format::fixed);
    if (ec != std::errc{}) {
        throw RangeError("data value too large to encode");
    }
    out.append(buf.data(), end);
}

// token includes its sign character.
double parse_value(std::string_view token, std::size_t offset) {
    const std::string_view body = token.substr(1);
    if (body.empty()) {
        throw FrameError("empty value after sign", offset + 1);
    }
    bool seen_dot = false;
    bool seen_digit = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (c == '.') {
            if (seen_dot) {
                throw FrameError("second decimal point in value", offset + 1 + i);
            }
            seen_dot = true;
        } else if (is_digit(c)) {
            seen_digit = true;
        } else {
            throw FrameError("unexpected character in value", offset + 1 + i);
        }
    }
    if (!seen_digit) {
        throw FrameError("value has no digits", offset + 1);
    }
    double magnitude = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), magnitude,
                                     std::chars_format::fixed);
    if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(magnitude)) {
        throw FrameError("malformed decimal", offset + 1);
    }
    return token[0] == '-' ? -magnitude : magnitude;
}

} // namespace

Address::Address(char c) : value_(c) {
    if (!is_valid(c)) {
        throw RangeError(std::string("invalid SDI-12 address '") + c + "'");
    }
}

bool Address::is_valid(char c) noexcept {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

Command Command::address_query() { return {Verb::AddressQuery, std::nullopt, 0}; }
Command Command::acknowledge(Address a) { return {Verb::Acknowledge, a, 0}; }
Command Command::identify(Address a) { return {Verb::Identify, a, 0}; }
Command Command::start_measurement(Address a) { return {Verb::StartMeasurement, a, 0}; }

Command Command::send_data(Address a, int index) {
    if (index < 0 || index > 9) {
        throw RangeError("SendData index must be in [0, 9]");
    }
    return {Verb::SendData, a, index};
}

std::string encode_command(const Command& cmd) {
    if (cmd.verb() == Verb::AddressQuery) {
        return "?!";
    }
    std::string out(1, cmd.address()->value());
    switch (cmd.verb()) {
    case Verb::Acknowledge:
        break;
    case Verb::Identify:
        out += 'I';
        break;
    case Verb::StartMeasurement:
        out += 'M';
        break;
    case Verb::SendData:
        out += 'D';
        out += static_cast<char>('0' + cmd.data_index());
        break;
    case Verb::AddressQuery:
        break;
    }
    out += '!';
    return out;
}

Command parse_command(std::string_view bytes) {
    if (bytes.empty() || bytes.back() != '!') {
        throw FrameError("command not terminated by '!'", bytes.size());
    }
    const std::string_view body = bytes.substr(0, bytes.size() - 1);
    if (body == "?") {
        return Command::address_query();
    }
    const Address a = address_at(body, 0);
    const std::string_view verb = body.substr(1);
    if (verb.empty()) {
        return Command::acknowledge(a);
    }
    if (verb == "I") {
        return Command::identify(a);
    }
    if (verb == "M") {
        return Command::start_measurement(a);
    }
    if (verb[0] == 'D') {
        if (verb.size() != 2 || !is_digit(verb[1])) {
            throw FrameError("SendData needs exactly one index digit", 2);
        }
        return Command::send_data(a, verb[1] - '0');
    }
    throw FrameError("unsupported command verb", 1);
}

std::string encode_measure_ack(const MeasureAck& ack) {
    if (ack.delay_s < 0 || ack.delay_s > 999 || ack.value_count < 0 || ack.value_count > 9) {
        throw RangeError("measure acknowledgement field out of range");
    }
    std::string out(1, ack.address.value());
    out += static_cast<char>('0' + ack.delay_s / 100);
    out += static_cast<char>('0' + ack.delay_s / 10 % 10);
    out += static_cast<char>('0' + ack.delay_s % 10);
    out += static_cast<char>('0' + ack.value_count);
    out += kResponseTerminator;
    return out;
}

MeasureAck parse_measure_ack(std::string_view bytes) {
    if (bytes.size() != 7) {
        throw FrameError("measure acknowledgement must be 7 bytes", std::min<std::size_t>(bytes.size(), 7));
    }
    const std::string_view body = response_body(bytes);
    const Address a = address_at(body, 0);
    int delay = 0;
    for (std::size_t i = 1; i <= 3; ++i) {
        if (!is_digit(body[i])) {
            throw FrameError("non-digit in delay field", i);
        }
        delay = delay * 10 + (body[i] - '0');
    }
    if (!is_digit(body[4])) {
        throw FrameError("non-digit in value count", 4);
    }
    return MeasureAck{a, delay, body[4] - '0'};
}

std::string encode_data_response(const DataResponse& resp) {
    if (resp.values.size() > kMaxValuesPerFrame) {
        throw RangeError("at most nine values per data frame");
    }
    std::string out(1, resp.address.value());
    for (double v : resp.values) {
        append_value(out, v);
    }
    out += kResponseTerminator;
    return out;
}

DataResponse parse_data_response(std::string_view bytes) {
    const std::string_view body = response_body(bytes);
    DataResponse resp{address_at(body, 0), {}};
    std::size_t i = 1;
    while (i < body.size()) {
        if (!is_sign(body[i])) {
            throw FrameError("value missing sign", i);
        }
        std::size_t end = i + 1;
        while (end < body.size() && !is_sign(body[end])) {
            ++end;
        }
        if (resp.values.size() == kMaxValuesPerFrame) {
            throw FrameError("more than nine values in frame", i);
        }
        resp.values.push_back(parse_value(body.substr(i, end - i), i));
        i = end;
    }
    return resp;
}

std::string encode_address_reply(Address a) {
    std::string out(1, a.value());
    out += kResponseTerminator;
    return out;
}

Address parse_address_reply(std::string_view bytes) {
    const std::string_view body = response_body(bytes);
    if (body.size() != 1) {
        throw FrameError("address reply must carry one character", body.empty() ? 0 : 1);
    }
    return address_at(body, 0);
}

void check_reading(const RawReading& r) {
    if (!std::isfinite(r.raw_counts) || r.raw_counts < 0.0) {
        throw RangeError("RAW counts must be finite and non-negative");
    }
    if (!std::isfinite(r.temp_c) || r.temp_c < -40.0 || r.temp_c > 60.0) {
        throw RangeError("temperature outside [-40, 60] C");
    }
    if (!std::isfinite(r.ec_us_cm) || r.ec_us_cm < 0.0) {
        throw RangeError("EC must be finite and non-negative");
    }
}

RawReading decode_reading(const DataResponse& resp) {
    if (resp.values.size() != 3) {
        throw ShapeError("expected 3 values (RAW, temperature, EC), got " +
                         std::to_string(resp.values.size()));
    }
    RawReading r{resp.values[0], resp.values[1], resp.values[2]};
    check_reading(r);
    return r;
}

DataResponse encode_reading(Address a, const RawReading& reading) {
    return DataResponse{a, {reading.raw_counts, reading.temp_c, reading.ec_us_cm}};
}

double default_deadline_s(int delay_s) noexcept { return 2.0 * delay_s + 1.0; }

RawReading run_transaction(SensorPort& sensor, Address addr, const TransactionOptions& options) {
    const auto ack_reply = sensor.transact(encode_command(Command::start_measurement(addr)));
    const double ack_deadline = options.deadline_s.value_or(default_deadline_s(0));
    if (!ack_reply || ack_reply->latency_s > ack_deadline) {
        throw TimeoutError("no measurement acknowledgement before deadline");
    }
    const MeasureAck ack = parse_measure_ack(ack_reply->bytes);
    if (ack.address != addr) {
        throw FrameError("acknowledgement from unexpected address", 0);
    }

    sensor.wait(ack.delay_s);

    const auto data_reply = sensor.transact(encode_command(Command::send_data(addr, 0)));
    const double deadline = options.deadline_s.value_or(default_deadline_s(ack.delay_s));
    if (!data_reply ||
        ack_reply->latency_s + ack.delay_s + data_reply->latency_s > deadline) {
        throw TimeoutError("no data frame before deadline");
    }
    const DataResponse data = parse_data_response(data_reply->bytes);
    if (data.address != addr) {
        throw FrameError("data frame from unexpected address", 0);
    }
    if (data.values.size() != static_cast<std::size_t>(ack.value_count)) {
        throw ShapeError("data frame carries " + std::to_string(data.values.size()) +
                         " values, acknowledgement announced " +
                         std::to_string(ack.value_count));
    }
    return decode_reading(data);
}

} // namespace agrione::sdi12
