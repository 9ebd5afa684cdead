#pragma once

// Encoder/decoder for the SDI-12 subset spoken by a TEROS-12-class probe,
// plus the measure -> wait -> read transaction.
//
// Commands end in '!', responses end in CR LF. Data values are signed
// decimals with an explicit leading '+' or '-'.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrione/error.hpp"

namespace agrione::sdi12 {

inline constexpr std::string_view kResponseTerminator = "\r\n";
inline constexpr std::size_t kMaxValuesPerFrame = 9;

class Address {
public:
    // Throws RangeError unless c is one of '0'-'9', 'a'-'z', 'A'-'Z'.
    explicit Address(char c);

    static bool is_valid(char c) noexcept;

    char value() const noexcept { return value_; }

    friend bool operator==(Address, Address) = default;

private:
    char value_;
};

enum class Verb { AddressQuery, Acknowledge, Identify, StartMeasurement, SendData };

// AddressQuery ("?!") is broadcast and carries no address.
class Command {
public:
    static Command address_query();
    static Command acknowledge(Address a);
    static Command identify(Address a);
    static Command start_measurement(Address a);
    // Throws RangeError unless index is in [0, 9].
    static Command send_data(Address a, int index);

    Verb verb() const noexcept { return verb_; }
    const std::optional<Address>& address() const noexcept { return address_; }
    int data_index() const noexcept { return data_index_; }

    friend bool operator==(const Command&, const Command&) = default;

private:
    Command(Verb v, std::optional<Address> a, int index)
        : verb_(v), address_(a), data_index_(index) {}

    Verb verb_;
    std::optional<Address> address_;
    int data_index_ = 0;
};

struct MeasureAck {
    Address address;
    int delay_s = 0;     // [0, 999], three digits on the wire
    int value_count = 0; // [0, 9], one digit on the wire

    friend bool operator==(const MeasureAck&, const MeasureAck&) = default;
};

struct DataResponse {
    Address address;
    std::vector<double> values;

    friend bool operator==(const DataResponse&, const DataResponse&) = default;
};

// One sensor transaction as decoded from a D0 response.
struct RawReading {
    double raw_counts = 0.0;
    double temp_c = 0.0;
    double ec_us_cm = 0.0;

    friend bool operator==(const RawReading&, const RawReading&) = default;
};

std::string encode_command(const Command& cmd);
Command parse_command(std::string_view bytes);

std::string encode_measure_ack(const MeasureAck& ack);
MeasureAck parse_measure_ack(std::string_view bytes);

// Throws RangeError for more than nine values or non-finite values.
std::string encode_data_response(const DataResponse& resp);
DataResponse parse_data_response(std::string_view bytes);

// "a\r\n", the reply to AddressQuery and Acknowledge.
std::string encode_address_reply(Address a);
Address parse_address_reply(std::string_view bytes);

// Values are ordered RAW, temperature, EC.
RawReading decode_reading(const DataResponse& resp);
DataResponse encode_reading(Address a, const RawReading& reading);

// Throws RangeError when a field is outside the sensor's physical range.
void check_reading(const RawReading& reading);

// A device on the bus. transact() sends one command frame and returns the
// reply frame, or nullopt when the device stays silent. Time is simulated:
// latency_s is how long the reply took and wait() advances the device clock.
class SensorPort {
public:
    struct Reply {
        std::string bytes;
        double latency_s = 0.0;
    };

    virtual ~SensorPort() = default;
    virtual std::optional<Reply> transact(std::string_view command) = 0;
    virtual void wait(double seconds) = 0;
};

struct TransactionOptions {
    // Deadline for each reply. Unset means 1 s for the acknowledgement and
    // 2 * delay_s + 1 s for the data frame.
    std::optional<double> deadline_s;
};

double default_deadline_s(int delay_s) noexcept;

// Issues exactly one aM! and one aD0! (unless the first step fails).
// Throws FrameError, ShapeError, RangeError or TimeoutError.
RawReading run_transaction(SensorPort& sensor, Address addr,
                           const TransactionOptions& options = {});

} // namespace agrione::sdi12
