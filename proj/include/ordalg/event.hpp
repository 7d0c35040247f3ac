#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace ordalg {

/// Role of one step in an event encoding.
enum class SegmentKind : std::uint8_t {
    atom,        // element of a static web
    label,       // label of a labeled occurrence
    index,       // occurrence index under a label
    component,   // tag of a sum component
    copy_class,  // fixed copy of a finite indexing
    copy,        // interchangeable copy of a sharp arena
    separator,   // boundary between index part and body part
    name,        // free name at the root of an abstract channel
    positive,    // input step of an abstract channel
    negative,    // output step of an abstract channel
};

/// One step of an event encoding. Permutable steps may be renamed by the arena
/// group among siblings of the same kind; fixed steps never move.
struct Segment {
    SegmentKind kind;
    std::int64_t value;
    bool permutable;

    auto operator<=>(const Segment&) const = default;
};

/// Reserved step values for inaction points of abstract channels.
inline constexpr std::int64_t inaction_bottom = -2;
inline constexpr std::int64_t inaction_top = -1;

/// An event is a path of segments; its canonical order is lexicographic on segments.
class Event {
public:
    using Segments = boost::container::small_vector<Segment, 4>;

    Event() = default;
    Event(std::initializer_list<Segment> segments) : segments_(segments) {}
    explicit Event(std::span<const Segment> segments)
        : segments_(segments.begin(), segments.end()) {}

    std::span<const Segment> segments() const { return {segments_.data(), segments_.size()}; }
    std::size_t length() const { return segments_.size(); }
    const Segment& operator[](std::size_t i) const { return segments_[i]; }

    Event then(const Segment& s) const {
        Event e = *this;
        e.segments_.push_back(s);
        return e;
    }

    Event then(const Event& tail) const {
        Event e = *this;
        e.segments_.insert(e.segments_.end(), tail.segments_.begin(), tail.segments_.end());
        return e;
    }

    Event under(const Segment& head) const {
        Event e;
        e.segments_.reserve(segments_.size() + 1);
        e.segments_.push_back(head);
        e.segments_.insert(e.segments_.end(), segments_.begin(), segments_.end());
        return e;
    }

    Event drop_front(std::size_t n) const {
        return Event(segments().subspan(n));
    }

    Segment& mutable_segment(std::size_t i) { return segments_[i]; }

    /// The event with every permutable value erased; two events share an orbit iff
    /// their skeletons agree.
    Event skeleton() const {
        Event e = *this;
        for (auto& s : e.segments_)
            if (s.permutable) s.value = 0;
        return e;
    }

    bool has_permutable_step() const {
        for (const auto& s : segments_)
            if (s.permutable) return true;
        return false;
    }

    bool operator==(const Event& other) const { return segments_ == other.segments_; }
    std::strong_ordering operator<=>(const Event& other) const {
        return std::lexicographical_compare_three_way(segments_.begin(), segments_.end(),
                                                      other.segments_.begin(),
                                                      other.segments_.end());
    }

private:
    Segments segments_;
};

/// Raw rendering of an encoding, used when no arena is at hand.
inline std::string raw_text(const Event& e) {
    std::string out;
    for (const auto& s : e.segments()) {
        if (!out.empty()) out += '/';
        out += std::to_string(static_cast<int>(s.kind));
        out += s.permutable ? '~' : ':';
        out += std::to_string(s.value);
    }
    return out;
}

}  // namespace ordalg
