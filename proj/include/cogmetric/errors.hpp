#pragma once

#include <stdexcept>
#include <string>

namespace cogmetric {

// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration value: bad weight, bad custom type name, adapter
// rename/exclude conflict, malformed registry or scheme file.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A counted interaction type has no weight in the active scheme. Signals
// misconfigured ingestion rather than a zero-weight type.
class UnknownInteractionTypeError : public Error {
public:
    explicit UnknownInteractionTypeError(std::string type_name)
        : Error("unknown interaction type '" + type_name + "': no weight in scheme"),
          type_name_(std::move(type_name)) {}
    UnknownInteractionTypeError(std::string type_name, const std::string& context)
        : Error(context + ": unknown interaction type '" + type_name + "': no weight in scheme"),
          type_name_(std::move(type_name)) {}
    const std::string& type_name() const { return type_name_; }

private:
    std::string type_name_;
};

// Effectiveness is a per-transmission ratio; undefined for zero transmissions.
class ZeroTransmissionsError : public Error {
public:
    ZeroTransmissionsError() : Error("transmissions must be >= 1") {}
    explicit ZeroTransmissionsError(const std::string& context)
        : Error(context + ": transmissions must be >= 1") {}
};

// Effectiveness input was negative, NaN, or infinite.
class InvalidEffectivenessError : public Error {
public:
    InvalidEffectivenessError()
        : Error("effectiveness must be a finite non-negative value") {}
};

// Interaction counts must be non-negative and must not overflow on addition.
class InvalidCountError : public Error {
public:
    using Error::Error;
};

// Input bytes cannot be decoded or the file-level structure is wrong.
class FormatError : public Error {
public:
    using Error::Error;
};

// A path could not be read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& path, const std::string& detail)
        : Error("io error on '" + path + "': " + detail), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// A platform-native interaction name is neither renamed, canonical, nor
// explicitly excluded by the adapter in use.
class UnknownNativeInteractionError : public Error {
public:
    explicit UnknownNativeInteractionError(std::string key)
        : Error("unknown native interaction '" + key + "'"), key_(std::move(key)) {}
    UnknownNativeInteractionError(std::string key, const std::string& context)
        : Error(context + ": unknown native interaction '" + key + "'"), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class EmptyGroupError : public Error {
public:
    EmptyGroupError() : Error("cannot aggregate an empty record group") {}
};

class UnknownContentIdError : public Error {
public:
    explicit UnknownContentIdError(const std::string& content_id)
        : Error("unknown content id '" + content_id + "'"), content_id_(content_id) {}
    const std::string& content_id() const { return content_id_; }

private:
    std::string content_id_;
};

// Snapshot timestamps within one series must strictly increase.
class OutOfOrderSnapshotError : public Error {
public:
    explicit OutOfOrderSnapshotError(const std::string& content_id)
        : Error("out-of-order snapshot for content id '" + content_id +
                "': captured_at is not after the latest snapshot"),
          content_id_(content_id) {}
    const std::string& content_id() const { return content_id_; }

private:
    std::string content_id_;
};

class StorageError : public Error {
public:
    using Error::Error;
};

} // namespace cogmetric
