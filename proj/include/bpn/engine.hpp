#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bpn/interaction.hpp"
#include "bpn/region.hpp"
#include "bpn/sat/dimacs.hpp"
#include "bpn/sat/solver.hpp"
#include "bpn/transition_system.hpp"

namespace bpn
{

enum class engine_kind
{
    exhaustive,
    propositional,
};

struct engine_config
{
    engine_kind kind = engine_kind::exhaustive;
    std::optional<double> budget_seconds;          // wall clock, per decision
    std::optional<std::uint64_t> conflict_budget;  // propositional engine, per atom
    std::size_t exhaustive_state_limit = 24;
    bool reuse_witnesses = true;
};

enum class atom_status
{
    found,
    absent,
    inconclusive,
};

struct atom_result
{
    atom_status status = atom_status::inconclusive;
    std::optional<region> witness;
};

using deadline_t = std::optional<std::chrono::steady_clock::time_point>;

inline deadline_t make_deadline( const engine_config& cfg )
{
    if ( !cfg.budget_seconds )
        return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>( std::chrono::duration<double>( *cfg.budget_seconds ) );
}

inline bool expired( const deadline_t& d )
{
    return d && std::chrono::steady_clock::now() > *d;
}

namespace detail
{

// (x, y) pairs observed on the arcs of an event, as a 4-bit mask indexed by 2x+y.
inline constexpr std::uint8_t pair_bit( bool x, bool y )
{
    return static_cast<std::uint8_t>( 1u << ( 2 * x + y ) );
}

// For each pair mask, the interactions of the type that realize every pair.
inline std::array<std::uint8_t, 16> compatible_by_mask( net_type type )
{
    std::array<std::uint8_t, 16> out{};
    for ( unsigned mask = 0; mask < 16; ++mask )
        for ( auto i : type.members() )
        {
            bool ok = true;
            for ( unsigned p = 0; p < 4 && ok; ++p )
                if ( mask & ( 1u << p ) )
                    ok = apply_interaction( i, ( p >> 1 ) != 0 ) == std::optional<bool>( ( p & 1 ) != 0 );
            if ( ok )
                out[mask] |= net_type::bit( i );
        }
    return out;
}

inline std::uint8_t undefined_mask( bool x )
{
    std::uint8_t m = 0;
    for ( auto i : all_interactions )
        if ( !defined_at( i, x ) )
            m |= net_type::bit( i );
    return m;
}

inline interaction first_of( std::uint8_t mask )
{
    for ( auto i : all_interactions )
        if ( mask & net_type::bit( i ) )
            return i;
    return interaction::nop;
}

} // namespace detail

// Enumerates supports in lexicographic order of the state list (state 0 most
// significant, 0 before 1) and picks, per event, the first compatible
// interaction in canonical order. For an event/state atom the atom's event
// takes the first compatible interaction undefined at the support of the state.
class exhaustive_engine
{
    const transition_system* _ts;
    net_type _type;
    std::vector<std::vector<std::pair<state_id, state_id>>> _arcs_by_event;
    std::array<std::uint8_t, 16> _compatible;

public:
    exhaustive_engine( const transition_system& ts, net_type type, std::size_t state_limit = 24 )
            : _ts{ &ts }, _type{ type }, _arcs_by_event( ts.num_events() ), _compatible{ detail::compatible_by_mask( type ) }
    {
        require_nonempty( type );
        if ( ts.num_states() > state_limit || ts.num_states() > 62 )
            throw invalid_input( "exhaustive engine limited to " + std::to_string( state_limit ) + " states, system has " +
                                 std::to_string( ts.num_states() ) );
        for ( const auto& a : ts.arcs() )
            _arcs_by_event[a.ev].emplace_back( a.src, a.dst );
    }

    // Calls visit(region) for every valid region satisfying the atom (if any),
    // in canonical order, until visit returns false. Returns false if the
    // deadline expired before the enumeration finished.
    template <class Visit>
    bool for_each( const std::optional<separation_atom>& atom, const deadline_t& deadline, Visit&& visit ) const
    {
        const auto n = _ts->num_states();
        const auto events = _ts->num_events();
        if ( atom )
            require_well_formed( *_ts, *atom );
        const std::uint64_t total = std::uint64_t{ 1 } << n;
        std::vector<bool> support( n );
        std::vector<std::uint8_t> choice( events );
        for ( std::uint64_t code = 0; code < total; ++code )
        {
            if ( ( code & 0xfff ) == 0xfff && expired( deadline ) )
                return false;
            for ( std::size_t s = 0; s < n; ++s )
                support[s] = ( ( code >> ( n - 1 - s ) ) & 1 ) != 0;
            std::optional<event_id> target;
            std::uint8_t target_filter = 0xff;
            if ( atom )
            {
                if ( const auto* p = std::get_if<state_pair>( &*atom ) )
                {
                    if ( support[p->first] == support[p->second] )
                        continue;
                }
                else
                {
                    const auto& es = std::get<event_state>( *atom );
                    target = es.event;
                    target_filter = detail::undefined_mask( support[es.state] );
                }
            }
            bool ok = true;
            for ( event_id e = 0; e < events && ok; ++e )
            {
                std::uint8_t mask = 0;
                for ( const auto& [s, t] : _arcs_by_event[e] )
                    mask |= detail::pair_bit( support[s], support[t] );
                std::uint8_t allowed = _compatible[mask];
                if ( target == e )
                    allowed &= target_filter;
                choice[e] = allowed;
                ok = allowed != 0;
            }
            if ( !ok )
                continue;
            region r{ support, std::vector<interaction>( events ) };
            for ( event_id e = 0; e < events; ++e )
                r.signature[e] = detail::first_of( choice[e] );
            if ( !visit( std::move( r ) ) )
                return true;
        }
        return true;
    }

    [[nodiscard]] atom_result solve( const separation_atom& atom, const deadline_t& deadline = {} ) const
    {
        atom_result out;
        const bool finished = for_each( atom, deadline, [&]( region r ) {
            out.witness = std::move( r );
            return false;
        } );
        out.status = out.witness ? atom_status::found : finished ? atom_status::absent : atom_status::inconclusive;
        return out;
    }
};

// One boolean variable per state (true = support 1) followed by one selector
// per (event, interaction of the type), events in order and interactions in
// canonical order. Each event selects exactly one interaction; every arc
// forbids the (x, y) pairs its selected interaction does not produce.
class propositional_engine
{
    const transition_system* _ts;
    net_type _type;
    std::vector<interaction> _members;
    sat::solver _solver;
    sat::cnf _base;

    void add_base( std::vector<sat::lit> c )
    {
        _base.add( c );
        _solver.add_clause( std::move( c ) );
    }

    [[nodiscard]] sat::var state_var( state_id s ) const { return static_cast<sat::var>( s ); }

    [[nodiscard]] sat::var selector( event_id e, std::size_t k ) const
    {
        return static_cast<sat::var>( _ts->num_states() + e * _members.size() + k );
    }

    [[nodiscard]] std::optional<std::size_t> member_index( interaction i ) const
    {
        for ( std::size_t k = 0; k < _members.size(); ++k )
            if ( _members[k] == i )
                return k;
        return std::nullopt;
    }

    // Clauses making the atom hold when `guard` is true (or unconditionally).
    [[nodiscard]] std::vector<std::vector<sat::lit>> atom_clauses( const separation_atom& atom ) const
    {
        using sat::neg;
        using sat::pos;
        if ( const auto* p = std::get_if<state_pair>( &atom ) )
        {
            const auto a = state_var( p->first ), b = state_var( p->second );
            return { { pos( a ), pos( b ) }, { neg( a ), neg( b ) } };
        }
        const auto& es = std::get<event_state>( atom );
        const auto x = state_var( es.state );
        // sup(s)=0 needs an interaction undefined at 0, sup(s)=1 one undefined at 1
        std::vector<sat::lit> at0{ pos( x ) }, at1{ neg( x ) };
        for ( std::size_t k = 0; k < _members.size(); ++k )
        {
            if ( !defined_at( _members[k], false ) )
                at0.push_back( pos( selector( es.event, k ) ) );
            if ( !defined_at( _members[k], true ) )
                at1.push_back( pos( selector( es.event, k ) ) );
        }
        return { at0, at1 };
    }

public:
    propositional_engine( const transition_system& ts, net_type type ) : _ts{ &ts }, _type{ type }, _members{ type.members() }
    {
        using sat::neg;
        using sat::pos;
        require_nonempty( type );
        const auto total = ts.num_states() + ts.num_events() * _members.size();
        for ( std::size_t v = 0; v < total; ++v )
            _solver.new_var();
        for ( event_id e = 0; e < ts.num_events(); ++e )
        {
            std::vector<sat::lit> some;
            for ( std::size_t k = 0; k < _members.size(); ++k )
                some.push_back( pos( selector( e, k ) ) );
            add_base( some );
            for ( std::size_t k = 0; k < _members.size(); ++k )
                for ( std::size_t l = k + 1; l < _members.size(); ++l )
                    add_base( { neg( selector( e, k ) ), neg( selector( e, l ) ) } );
        }
        for ( const auto& a : ts.arcs() )
            for ( std::size_t k = 0; k < _members.size(); ++k )
                for ( int x = 0; x < 2; ++x )
                    for ( int y = 0; y < 2; ++y )
                    {
                        if ( apply_interaction( _members[k], x != 0 ) == std::optional<bool>( y != 0 ) )
                            continue;
                        add_base( { neg( selector( a.ev, k ) ), sat::make_lit( state_var( a.src ), x != 0 ),
                                    sat::make_lit( state_var( a.dst ), y != 0 ) } );
                    }
    }

    [[nodiscard]] std::size_t num_vars() const { return _solver.num_vars(); }
    [[nodiscard]] std::size_t num_clauses() const { return _solver.num_clauses(); }

    // The region encoding with the atom as plain clauses, for external solvers.
    [[nodiscard]] sat::cnf export_cnf( const std::optional<separation_atom>& atom ) const
    {
        sat::cnf out = _base;
        out.num_vars = _ts->num_states() + _ts->num_events() * _members.size();
        if ( atom )
        {
            require_well_formed( *_ts, *atom );
            for ( auto c : atom_clauses( *atom ) )
                out.add( std::move( c ) );
        }
        return out;
    }

    // Decodes an assignment of the encoding's variables.
    [[nodiscard]] region decode( const std::vector<bool>& model ) const
    {
        const auto total = _ts->num_states() + _ts->num_events() * _members.size();
        if ( model.size() < total )
            throw invalid_input( "model assigns " + std::to_string( model.size() ) + " of " + std::to_string( total ) +
                                 " variables" );
        region r{ std::vector<bool>( _ts->num_states() ), std::vector<interaction>( _ts->num_events(), interaction::nop ) };
        for ( state_id s = 0; s < _ts->num_states(); ++s )
            r.support[s] = model[state_var( s )];
        for ( event_id e = 0; e < _ts->num_events(); ++e )
            for ( std::size_t k = 0; k < _members.size(); ++k )
                if ( model[selector( e, k )] )
                    r.signature[e] = _members[k];
        return r;
    }

    [[nodiscard]] region model_region() const
    {
        std::vector<bool> model( _ts->num_states() + _ts->num_events() * _members.size() );
        for ( std::size_t v = 0; v < model.size(); ++v )
            model[v] = _solver.model_value( static_cast<sat::var>( v ) );
        return decode( model );
    }

    // The atom constraint is guarded by a fresh activation literal that is
    // retired afterwards, so one engine serves any number of atoms.
    atom_result solve( const separation_atom& atom, const deadline_t& deadline = {},
                       std::optional<std::uint64_t> conflicts = std::nullopt )
    {
        require_well_formed( *_ts, atom );
        const auto act = _solver.new_var();
        for ( auto c : atom_clauses( atom ) )
        {
            c.push_back( sat::neg( act ) );
            _solver.add_clause( std::move( c ) );
        }
        const std::array<sat::lit, 1> assume{ sat::pos( act ) };
        const auto r = _solver.solve( assume, { deadline, conflicts } );
        atom_result out;
        if ( r == sat::result::sat )
        {
            out.status = atom_status::found;
            out.witness = model_region();
        }
        else
            out.status = r == sat::result::unsat ? atom_status::absent : atom_status::inconclusive;
        _solver.add_clause( { sat::neg( act ) } );
        return out;
    }

    // Makes the atom a permanent constraint (used for enumeration).
    void require( const separation_atom& atom )
    {
        require_well_formed( *_ts, atom );
        for ( auto c : atom_clauses( atom ) )
            _solver.add_clause( std::move( c ) );
    }

    // Excludes every region with this support.
    void block_support( const std::vector<bool>& support )
    {
        std::vector<sat::lit> c;
        for ( state_id s = 0; s < support.size(); ++s )
            c.push_back( sat::make_lit( state_var( s ), support[s] ) );
        _solver.add_clause( std::move( c ) );
    }

    // Solves the current constraints without an atom.
    atom_result next( const deadline_t& deadline = {}, std::optional<std::uint64_t> conflicts = std::nullopt )
    {
        atom_result out;
        const auto r = _solver.solve( {}, { deadline, conflicts } );
        if ( r == sat::result::sat )
        {
            out.status = atom_status::found;
            out.witness = model_region();
        }
        else
            out.status = r == sat::result::unsat ? atom_status::absent : atom_status::inconclusive;
        return out;
    }
};

// Solves a single atom from scratch with the configured engine.
inline atom_result solve_atom( const transition_system& ts, net_type type, const separation_atom& atom,
                               const engine_config& cfg = {} )
{
    require_nonempty( type );
    require_well_formed( ts, atom );
    const auto deadline = make_deadline( cfg );
    if ( cfg.kind == engine_kind::exhaustive )
        return exhaustive_engine( ts, type, cfg.exhaustive_state_limit ).solve( atom, deadline );
    propositional_engine engine( ts, type );
    return engine.solve( atom, deadline, cfg.conflict_budget );
}

struct enumeration_result
{
    std::vector<region> regions;
    bool complete = true; // false if the budget ran out before `limit` was reached or exhaustion proven
};

// Up to `limit` valid regions with pairwise distinct supports that inhibit e at s.
inline enumeration_result enumerate_inhibiting_regions( const transition_system& ts, net_type type, event_id e, state_id s,
                                                        std::size_t limit, const engine_config& cfg = {} )
{
    require_nonempty( type );
    const separation_atom atom = event_state{ e, s };
    require_well_formed( ts, atom );
    const auto deadline = make_deadline( cfg );
    enumeration_result out;
    if ( limit == 0 )
        return out;
    if ( cfg.kind == engine_kind::exhaustive )
    {
        // Regions come grouped by support, so the first per support suffices.
        std::optional<std::vector<bool>> last;
        out.complete = exhaustive_engine( ts, type, cfg.exhaustive_state_limit ).for_each( atom, deadline, [&]( region r ) {
            if ( last && *last == r.support )
                return true;
            last = r.support;
            out.regions.push_back( std::move( r ) );
            return out.regions.size() < limit;
        } );
        return out;
    }
    propositional_engine engine( ts, type );
    engine.require( atom );
    while ( out.regions.size() < limit )
    {
        auto r = engine.next( deadline, cfg.conflict_budget );
        if ( r.status == atom_status::inconclusive )
        {
            out.complete = false;
            break;
        }
        if ( r.status == atom_status::absent )
            break;
        engine.block_support( r.witness->support );
        out.regions.push_back( std::move( *r.witness ) );
    }
    return out;
}

} // namespace bpn
