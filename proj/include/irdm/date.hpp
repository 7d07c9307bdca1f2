#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace irdm {

// Calendar day, stored as days since 1970-01-01. Only ISO-8601 dates
// (YYYY-MM-DD) are accepted on the wire.
class Date {
public:
    Date() = default;
    Date(int year, int month, int day);

    static Date from_serial(std::int64_t days) {
        Date d;
        d.serial_ = days;
        return d;
    }

    // Throws std::invalid_argument on anything that is not a valid
    // YYYY-MM-DD calendar date.
    static Date parse(const std::string& text);

    std::int64_t serial() const { return serial_; }
    std::string to_string() const;

    Date plus_days(std::int64_t n) const { return from_serial(serial_ + n); }
    std::int64_t operator-(const Date& other) const { return serial_ - other.serial_; }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t serial_ = 0;
};

}  // namespace irdm
