#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace ugvq {

// Floats are serialized with 17 significant digits everywhere so that every
// emitted value parses back to the identical double.
std::string format_double(double v);

// Streaming JSON writer with explicit structure. Keys keep insertion order,
// doubles go through format_double, so identical inputs yield identical bytes.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);

    std::string str() const { return out_.str(); }

private:
    void separate();
    std::ostringstream out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace ugvq
