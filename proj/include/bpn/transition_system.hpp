#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "bpn/error.hpp"

namespace bpn
{

using state_id = std::uint32_t;
using event_id = std::uint32_t;

struct arc
{
    state_id src;
    event_id ev;
    state_id dst;

    friend auto operator<=>( const arc&, const arc& ) = default;
};

// Name-level description of a transition system, as produced by the text
// parser or assembled by hand. Nothing about it is checked; see validate_ts.
struct ts_spec
{
    struct named_arc
    {
        std::string src;
        std::string ev;
        std::string dst;
        std::size_t line = 0;
    };

    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> events;
    std::vector<named_arc> arcs;
    std::optional<std::string> initial;
};

enum class ts_issue_kind
{
    dangling_state,
    dangling_event,
    missing_initial,
    duplicate_name,
    nondeterministic,
    unreachable_state,
    unused_event,
};

inline std::string_view name_of( ts_issue_kind k )
{
    switch ( k )
    {
    case ts_issue_kind::dangling_state: return "dangling state";
    case ts_issue_kind::dangling_event: return "dangling event";
    case ts_issue_kind::missing_initial: return "missing initial state";
    case ts_issue_kind::duplicate_name: return "duplicate name";
    case ts_issue_kind::nondeterministic: return "nondeterministic step";
    case ts_issue_kind::unreachable_state: return "unreachable state";
    case ts_issue_kind::unused_event: return "unused event";
    }
    return "?";
}

struct ts_issue
{
    ts_issue_kind kind;
    std::string subject;
    std::string detail;
};

struct validation_report
{
    std::vector<ts_issue> issues;

    [[nodiscard]] bool ok() const { return issues.empty(); }

    [[nodiscard]] bool has( ts_issue_kind k, std::string_view subject = {} ) const
    {
        return std::any_of( issues.begin(), issues.end(), [&]( const ts_issue& i ) {
            return i.kind == k && ( subject.empty() || i.subject == subject );
        } );
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string out;
        for ( const auto& i : issues )
        {
            out += std::string( name_of( i.kind ) ) + ": " + i.subject;
            if ( !i.detail.empty() )
                out += " (" + i.detail + ")";
            out += '\n';
        }
        return out;
    }
};

// Labeled graph with a distinguished initial state. Arcs are kept sorted by
// (source, event, target), so the successor lookup is a binary search inside
// the source's slice.
//
// A value is always structurally sound (no dangling names). Determinism,
// reachability and event usage are reported by validate_ts, not enforced:
// unions and intermediate constructions need the relaxed form, and regions
// are defined arc by arc for any labeled graph.
class transition_system
{
    std::string _name;
    std::vector<std::string> _states;
    std::vector<std::string> _events;
    std::vector<arc> _arcs;
    std::vector<std::uint32_t> _out_begin;
    state_id _initial = 0;
    bool _deterministic = true;
    std::unordered_map<std::string, state_id> _state_index;
    std::unordered_map<std::string, event_id> _event_index;

public:
    transition_system() = default;

    transition_system( std::string name, std::vector<std::string> states, std::vector<std::string> events,
                       std::vector<arc> arcs, state_id initial )
            : _name{ std::move( name ) }, _states{ std::move( states ) }, _events{ std::move( events ) },
              _arcs{ std::move( arcs ) }, _initial{ initial }
    {
        if ( _states.empty() )
            throw invalid_input( "transition system '" + _name + "' has no states" );
        if ( _initial >= _states.size() )
            throw domain_mismatch( "initial state index out of range" );
        for ( state_id s = 0; s < _states.size(); ++s )
            if ( !_state_index.emplace( _states[s], s ).second )
                throw invalid_input( "duplicate state name '" + _states[s] + "'" );
        for ( event_id e = 0; e < _events.size(); ++e )
            if ( !_event_index.emplace( _events[e], e ).second )
                throw invalid_input( "duplicate event name '" + _events[e] + "'" );
        for ( const auto& a : _arcs )
            if ( a.src >= _states.size() || a.dst >= _states.size() || a.ev >= _events.size() )
                throw domain_mismatch( "arc refers to an unknown state or event" );

        std::sort( _arcs.begin(), _arcs.end() );
        _arcs.erase( std::unique( _arcs.begin(), _arcs.end() ), _arcs.end() );
        for ( std::size_t k = 1; k < _arcs.size(); ++k )
            if ( _arcs[k - 1].src == _arcs[k].src && _arcs[k - 1].ev == _arcs[k].ev )
                _deterministic = false;

        _out_begin.assign( _states.size() + 1, 0 );
        for ( const auto& a : _arcs )
            ++_out_begin[a.src + 1];
        for ( std::size_t s = 0; s < _states.size(); ++s )
            _out_begin[s + 1] += _out_begin[s];
    }

    // Throws invalid_input listing every structural issue of the spec.
    static transition_system from_spec( const ts_spec& spec );

    [[nodiscard]] const std::string& name() const { return _name; }
    [[nodiscard]] std::size_t num_states() const { return _states.size(); }
    [[nodiscard]] std::size_t num_events() const { return _events.size(); }
    [[nodiscard]] const std::vector<std::string>& states() const { return _states; }
    [[nodiscard]] const std::vector<std::string>& events() const { return _events; }
    [[nodiscard]] const std::vector<arc>& arcs() const { return _arcs; }
    [[nodiscard]] state_id initial() const { return _initial; }
    [[nodiscard]] bool is_deterministic() const { return _deterministic; }
    [[nodiscard]] const std::string& state_name( state_id s ) const { return _states.at( s ); }
    [[nodiscard]] const std::string& event_name( event_id e ) const { return _events.at( e ); }

    [[nodiscard]] std::optional<state_id> find_state( const std::string& name ) const
    {
        auto it = _state_index.find( name );
        if ( it == _state_index.end() )
            return std::nullopt;
        return it->second;
    }
    [[nodiscard]] std::optional<event_id> find_event( const std::string& name ) const
    {
        auto it = _event_index.find( name );
        if ( it == _event_index.end() )
            return std::nullopt;
        return it->second;
    }
    [[nodiscard]] state_id state( const std::string& name ) const
    {
        if ( auto s = find_state( name ) )
            return *s;
        throw domain_mismatch( "unknown state '" + name + "' in '" + _name + "'" );
    }
    [[nodiscard]] event_id event( const std::string& name ) const
    {
        if ( auto e = find_event( name ) )
            return *e;
        throw domain_mismatch( "unknown event '" + name + "' in '" + _name + "'" );
    }

    [[nodiscard]] std::span<const arc> out_arcs( state_id s ) const
    {
        return { _arcs.data() + _out_begin[s], _arcs.data() + _out_begin[s + 1] };
    }

    // The successor; for a nondeterministic step, the first target in order.
    [[nodiscard]] std::optional<state_id> step( state_id s, event_id e ) const
    {
        auto out = out_arcs( s );
        auto it = std::lower_bound( out.begin(), out.end(), e, []( const arc& a, event_id ev ) { return a.ev < ev; } );
        if ( it != out.end() && it->ev == e )
            return it->dst;
        return std::nullopt;
    }

    [[nodiscard]] bool occurs( event_id e, state_id s ) const { return step( s, e ).has_value(); }

    [[nodiscard]] bool has_arc( state_id s, event_id e, state_id t ) const
    {
        auto out = out_arcs( s );
        return std::binary_search( out.begin(), out.end(), arc{ s, e, t } );
    }

    [[nodiscard]] ts_spec to_spec() const
    {
        ts_spec spec;
        spec.name = _name;
        spec.states = _states;
        spec.events = _events;
        for ( const auto& a : _arcs )
            spec.arcs.push_back( { _states[a.src], _events[a.ev], _states[a.dst], 0 } );
        spec.initial = _states[_initial];
        return spec;
    }

    // Structural equality on names: order of states, events and arcs is
    // irrelevant.
    friend bool operator==( const transition_system& a, const transition_system& b )
    {
        auto named_arcs = []( const transition_system& t ) {
            std::set<std::tuple<std::string, std::string, std::string>> out;
            for ( const auto& x : t._arcs )
                out.emplace( t._states[x.src], t._events[x.ev], t._states[x.dst] );
            return out;
        };
        return a._name == b._name && a._states[a._initial] == b._states[b._initial] &&
               std::set( a._states.begin(), a._states.end() ) == std::set( b._states.begin(), b._states.end() ) &&
               std::set( a._events.begin(), a._events.end() ) == std::set( b._events.begin(), b._events.end() ) &&
               named_arcs( a ) == named_arcs( b );
    }
};

namespace detail
{

inline void structural_issues( const ts_spec& spec, validation_report& report )
{
    std::unordered_map<std::string, std::size_t> states, events;
    for ( const auto& s : spec.states )
        if ( !states.emplace( s, states.size() ).second )
            report.issues.push_back( { ts_issue_kind::duplicate_name, s, "state declared twice" } );
    for ( const auto& e : spec.events )
        if ( !events.emplace( e, events.size() ).second )
            report.issues.push_back( { ts_issue_kind::duplicate_name, e, "event declared twice" } );

    if ( !spec.initial )
        report.issues.push_back( { ts_issue_kind::missing_initial, spec.name, "no initial state given" } );
    else if ( !states.contains( *spec.initial ) )
        report.issues.push_back( { ts_issue_kind::dangling_state, *spec.initial, "initial state is not declared" } );

    for ( const auto& a : spec.arcs )
    {
        std::string where = a.line ? "line " + std::to_string( a.line ) : a.src + " " + a.ev + " " + a.dst;
        for ( const auto* s : { &a.src, &a.dst } )
            if ( !states.contains( *s ) )
                report.issues.push_back( { ts_issue_kind::dangling_state, *s, "arc endpoint, " + where } );
        if ( !events.contains( a.ev ) )
            report.issues.push_back( { ts_issue_kind::dangling_event, a.ev, "arc label, " + where } );
    }
}

} // namespace detail

inline transition_system transition_system::from_spec( const ts_spec& spec )
{
    validation_report report;
    detail::structural_issues( spec, report );
    if ( !report.ok() )
        throw invalid_input( "malformed transition system '" + spec.name + "':\n" + report.to_string() );

    std::unordered_map<std::string, state_id> sidx;
    std::unordered_map<std::string, event_id> eidx;
    for ( const auto& s : spec.states )
        sidx.emplace( s, static_cast<state_id>( sidx.size() ) );
    for ( const auto& e : spec.events )
        eidx.emplace( e, static_cast<event_id>( eidx.size() ) );
    std::vector<arc> arcs;
    arcs.reserve( spec.arcs.size() );
    for ( const auto& a : spec.arcs )
        arcs.push_back( { sidx.at( a.src ), eidx.at( a.ev ), sidx.at( a.dst ) } );
    return { spec.name, spec.states, spec.events, std::move( arcs ), sidx.at( *spec.initial ) };
}

// States reachable from the initial state along directed arcs, in BFS order.
inline std::vector<bool> reachable_states( const transition_system& ts )
{
    std::vector<bool> seen( ts.num_states(), false );
    std::vector<state_id> queue{ ts.initial() };
    seen[ts.initial()] = true;
    for ( std::size_t head = 0; head < queue.size(); ++head )
        for ( const auto& a : ts.out_arcs( queue[head] ) )
            if ( !seen[a.dst] )
            {
                seen[a.dst] = true;
                queue.push_back( a.dst );
            }
    return seen;
}

inline validation_report validate_ts( const transition_system& ts )
{
    validation_report report;
    const auto& arcs = ts.arcs();
    for ( std::size_t k = 1; k < arcs.size(); ++k )
        if ( arcs[k - 1].src == arcs[k].src && arcs[k - 1].ev == arcs[k].ev &&
             ( k < 2 || arcs[k - 2].src != arcs[k].src || arcs[k - 2].ev != arcs[k].ev ) )
            report.issues.push_back( { ts_issue_kind::nondeterministic, ts.state_name( arcs[k].src ),
                                       "event " + ts.event_name( arcs[k].ev ) + " leads to both " +
                                           ts.state_name( arcs[k - 1].dst ) + " and " + ts.state_name( arcs[k].dst ) } );
    auto seen = reachable_states( ts );
    for ( state_id s = 0; s < ts.num_states(); ++s )
        if ( !seen[s] )
            report.issues.push_back( { ts_issue_kind::unreachable_state, ts.state_name( s ), "not reachable from " + ts.state_name( ts.initial() ) } );
    std::vector<bool> used( ts.num_events(), false );
    for ( const auto& a : ts.arcs() )
        used[a.ev] = true;
    for ( event_id e = 0; e < ts.num_events(); ++e )
        if ( !used[e] )
            report.issues.push_back( { ts_issue_kind::unused_event, ts.event_name( e ), "labels no arc" } );
    return report;
}

inline validation_report validate_ts( const ts_spec& spec )
{
    validation_report report;
    detail::structural_issues( spec, report );
    if ( !report.ok() )
        return report;
    return validate_ts( transition_system::from_spec( spec ) );
}

inline void require_valid( const transition_system& ts )
{
    auto report = validate_ts( ts );
    if ( !report.ok() )
        throw invalid_input( "transition system '" + ts.name() + "' is not valid:\n" + report.to_string() );
}

// Max over states of max(in-degree, out-degree); every arc counts once at each
// endpoint, a self-loop counts once in each direction.
inline std::size_t grade( const transition_system& ts )
{
    std::vector<std::size_t> in( ts.num_states(), 0 ), out( ts.num_states(), 0 );
    for ( const auto& a : ts.arcs() )
    {
        ++out[a.src];
        ++in[a.dst];
    }
    std::size_t g = 0;
    for ( std::size_t s = 0; s < ts.num_states(); ++s )
        g = std::max( { g, in[s], out[s] } );
    return g;
}

// Incremental construction by names; states and events are declared on first
// mention.
class ts_builder
{
    ts_spec _spec;
    std::set<std::string> _states;
    std::set<std::string> _events;

public:
    explicit ts_builder( std::string name ) { _spec.name = std::move( name ); }

    ts_builder& state( const std::string& s )
    {
        if ( _states.insert( s ).second )
            _spec.states.push_back( s );
        return *this;
    }
    ts_builder& event( const std::string& e )
    {
        if ( _events.insert( e ).second )
            _spec.events.push_back( e );
        return *this;
    }
    ts_builder& arc( const std::string& src, const std::string& ev, const std::string& dst )
    {
        state( src );
        event( ev );
        state( dst );
        _spec.arcs.push_back( { src, ev, dst, 0 } );
        return *this;
    }
    // s <-e-> t
    ts_builder& both( const std::string& s, const std::string& ev, const std::string& t )
    {
        arc( s, ev, t );
        return arc( t, ev, s );
    }
    ts_builder& initial( const std::string& s )
    {
        state( s );
        _spec.initial = s;
        return *this;
    }

    [[nodiscard]] const ts_spec& spec() const { return _spec; }
    [[nodiscard]] transition_system build() const { return transition_system::from_spec( _spec ); }
};

} // namespace bpn
