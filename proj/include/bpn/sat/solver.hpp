#pragma once

// A small conflict-driven clause-learning SAT solver: two watched literals,
// VSIDS branching with phase saving, first-UIP learning with local clause
// minimization, Luby restarts and activity-based learnt clause deletion.
// Incremental use goes through assumptions. Fully deterministic.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bpn::sat
{

using var = int;

struct lit
{
    int x = -2;

    [[nodiscard]] constexpr var variable() const { return x >> 1; }
    [[nodiscard]] constexpr bool negated() const { return ( x & 1 ) != 0; }
    constexpr lit operator~() const { return lit{ x ^ 1 }; }
    friend constexpr bool operator==( lit, lit ) = default;
    friend constexpr auto operator<=>( lit, lit ) = default;
};

constexpr lit make_lit( var v, bool negated = false )
{
    return lit{ 2 * v + ( negated ? 1 : 0 ) };
}
constexpr lit pos( var v ) { return make_lit( v, false ); }
constexpr lit neg( var v ) { return make_lit( v, true ); }

enum class result
{
    sat,
    unsat,
    unknown,
};

struct limits
{
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<std::uint64_t> conflicts;
};

class solver
{
    enum class value : std::int8_t
    {
        f = 0,
        t = 1,
        undef = 2,
    };

    struct clause
    {
        std::vector<lit> lits;
        bool learnt = false;
        bool deleted = false;
        double activity = 0;
    };

    struct watcher
    {
        int cref;
        lit blocker;
    };

    static constexpr int no_reason = -1;

    std::vector<clause> _clauses;
    std::vector<int> _learnts;
    std::vector<std::vector<watcher>> _watches;
    std::vector<value> _assigns;
    std::vector<int> _level;
    std::vector<int> _reason;
    std::vector<char> _phase;
    std::vector<double> _activity;
    std::vector<char> _seen;
    std::vector<lit> _trail;
    std::vector<int> _trail_lim;
    std::size_t _qhead = 0;
    std::vector<value> _model;
    bool _ok = true;

    // max-heap on activity, ties broken towards the smaller variable index
    std::vector<var> _heap;
    std::vector<int> _heap_pos;

    double _var_inc = 1.0;
    double _cla_inc = 1.0;
    double _max_learnts = 0;
    std::uint64_t _conflicts = 0;

    [[nodiscard]] value value_of( lit p ) const
    {
        auto v = _assigns[p.variable()];
        if ( v == value::undef )
            return v;
        return ( v == value::t ) != p.negated() ? value::t : value::f;
    }

    [[nodiscard]] int decision_level() const { return static_cast<int>( _trail_lim.size() ); }

    bool heap_less( var a, var b ) const
    {
        if ( _activity[a] != _activity[b] )
            return _activity[a] > _activity[b];
        return a < b;
    }
    void heap_up( int i )
    {
        var v = _heap[i];
        while ( i > 0 )
        {
            int parent = ( i - 1 ) / 2;
            if ( !heap_less( v, _heap[parent] ) )
                break;
            _heap[i] = _heap[parent];
            _heap_pos[_heap[i]] = i;
            i = parent;
        }
        _heap[i] = v;
        _heap_pos[v] = i;
    }
    void heap_down( int i )
    {
        var v = _heap[i];
        const int n = static_cast<int>( _heap.size() );
        while ( true )
        {
            int child = 2 * i + 1;
            if ( child >= n )
                break;
            if ( child + 1 < n && heap_less( _heap[child + 1], _heap[child] ) )
                ++child;
            if ( !heap_less( _heap[child], v ) )
                break;
            _heap[i] = _heap[child];
            _heap_pos[_heap[i]] = i;
            i = child;
        }
        _heap[i] = v;
        _heap_pos[v] = i;
    }
    void heap_insert( var v )
    {
        if ( _heap_pos[v] >= 0 )
            return;
        _heap.push_back( v );
        _heap_pos[v] = static_cast<int>( _heap.size() ) - 1;
        heap_up( _heap_pos[v] );
    }
    var heap_pop()
    {
        var top = _heap.front();
        _heap_pos[top] = -1;
        var last = _heap.back();
        _heap.pop_back();
        if ( !_heap.empty() )
        {
            _heap[0] = last;
            _heap_pos[last] = 0;
            heap_down( 0 );
        }
        return top;
    }

    void bump_var( var v )
    {
        if ( ( _activity[v] += _var_inc ) > 1e100 )
        {
            for ( auto& a : _activity )
                a *= 1e-100;
            _var_inc *= 1e-100;
        }
        if ( _heap_pos[v] >= 0 )
            heap_up( _heap_pos[v] );
    }

    void bump_clause( clause& c )
    {
        if ( ( c.activity += _cla_inc ) > 1e20 )
        {
            for ( int cr : _learnts )
                _clauses[cr].activity *= 1e-20;
            _cla_inc *= 1e-20;
        }
    }

    void assign( lit p, int reason )
    {
        const var v = p.variable();
        _assigns[v] = p.negated() ? value::f : value::t;
        _level[v] = decision_level();
        _reason[v] = reason;
        _trail.push_back( p );
    }

    void attach( int cr )
    {
        const auto& c = _clauses[cr].lits;
        _watches[( ~c[0] ).x].push_back( { cr, c[1] } );
        _watches[( ~c[1] ).x].push_back( { cr, c[0] } );
    }

    // Returns the conflicting clause, or no_reason.
    int propagate()
    {
        int conflict = no_reason;
        while ( _qhead < _trail.size() )
        {
            const lit p = _trail[_qhead++];
            auto& ws = _watches[p.x];
            std::size_t i = 0, j = 0;
            while ( i < ws.size() )
            {
                watcher w = ws[i];
                if ( _clauses[w.cref].deleted )
                {
                    ++i;
                    continue;
                }
                if ( value_of( w.blocker ) == value::t )
                {
                    ws[j++] = ws[i++];
                    continue;
                }
                auto& c = _clauses[w.cref].lits;
                const lit false_lit = ~p;
                if ( c[0] == false_lit )
                    std::swap( c[0], c[1] );
                ++i;
                const lit first = c[0];
                if ( first != w.blocker && value_of( first ) == value::t )
                {
                    ws[j++] = { w.cref, first };
                    continue;
                }
                bool moved = false;
                for ( std::size_t k = 2; k < c.size(); ++k )
                    if ( value_of( c[k] ) != value::f )
                    {
                        std::swap( c[1], c[k] );
                        _watches[( ~c[1] ).x].push_back( { w.cref, first } );
                        moved = true;
                        break;
                    }
                if ( moved )
                    continue;
                ws[j++] = { w.cref, first };
                if ( value_of( first ) == value::f )
                {
                    conflict = w.cref;
                    _qhead = _trail.size();
                    while ( i < ws.size() )
                        ws[j++] = ws[i++];
                }
                else
                    assign( first, w.cref );
            }
            ws.resize( j );
            if ( conflict != no_reason )
                break;
        }
        return conflict;
    }

    bool redundant( lit p ) const
    {
        const int r = _reason[p.variable()];
        if ( r == no_reason )
            return false;
        for ( const lit q : _clauses[r].lits )
            if ( q.variable() != p.variable() && !_seen[q.variable()] && _level[q.variable()] > 0 )
                return false;
        return true;
    }

    void analyze( int conflict, std::vector<lit>& learnt, int& backtrack_level )
    {
        learnt.assign( 1, lit{} );
        int pending = 0;
        lit p{};
        std::size_t index = _trail.size();
        do
        {
            auto& c = _clauses[conflict];
            if ( c.learnt )
                bump_clause( c );
            for ( std::size_t k = ( p.x == -2 ? 0 : 1 ); k < c.lits.size(); ++k )
            {
                const lit q = c.lits[k];
                const var v = q.variable();
                if ( _seen[v] || _level[v] == 0 )
                    continue;
                _seen[v] = 1;
                bump_var( v );
                if ( _level[v] >= decision_level() )
                    ++pending;
                else
                    learnt.push_back( q );
            }
            while ( !_seen[_trail[--index].variable()] )
                ;
            p = _trail[index];
            conflict = _reason[p.variable()];
            _seen[p.variable()] = 0;
            --pending;
        } while ( pending > 0 );
        learnt[0] = ~p;

        std::vector<lit> kept{ learnt[0] };
        for ( std::size_t k = 1; k < learnt.size(); ++k )
            if ( !redundant( learnt[k] ) )
                kept.push_back( learnt[k] );
        for ( std::size_t k = 1; k < learnt.size(); ++k )
            _seen[learnt[k].variable()] = 0;
        learnt = std::move( kept );

        if ( learnt.size() == 1 )
            backtrack_level = 0;
        else
        {
            std::size_t max_i = 1;
            for ( std::size_t k = 2; k < learnt.size(); ++k )
                if ( _level[learnt[k].variable()] > _level[learnt[max_i].variable()] )
                    max_i = k;
            std::swap( learnt[1], learnt[max_i] );
            backtrack_level = _level[learnt[1].variable()];
        }
    }

    void cancel_until( int level )
    {
        if ( decision_level() <= level )
            return;
        for ( std::size_t k = _trail.size(); k-- > static_cast<std::size_t>( _trail_lim[level] ); )
        {
            const var v = _trail[k].variable();
            _assigns[v] = value::undef;
            _reason[v] = no_reason;
            _phase[v] = _trail[k].negated() ? 1 : 0;
            heap_insert( v );
        }
        _trail.resize( _trail_lim[level] );
        _trail_lim.resize( level );
        _qhead = _trail.size();
    }

    bool locked( int cr ) const
    {
        const auto& c = _clauses[cr].lits;
        const var v = c[0].variable();
        return _reason[v] == cr && value_of( c[0] ) == value::t;
    }

    void reduce_learnts()
    {
        std::vector<int> order = _learnts;
        std::sort( order.begin(), order.end(), [&]( int a, int b ) {
            if ( _clauses[a].activity != _clauses[b].activity )
                return _clauses[a].activity < _clauses[b].activity;
            return a < b;
        } );
        std::vector<int> keep;
        const std::size_t half = order.size() / 2;
        for ( std::size_t k = 0; k < order.size(); ++k )
        {
            const int cr = order[k];
            auto& c = _clauses[cr];
            if ( k < half && c.lits.size() > 2 && !locked( cr ) )
            {
                c.deleted = true;
                c.lits.clear();
                c.lits.shrink_to_fit();
            }
            else
                keep.push_back( cr );
        }
        std::sort( keep.begin(), keep.end() );
        _learnts = std::move( keep );
        for ( auto& ws : _watches )
            ws.erase( std::remove_if( ws.begin(), ws.end(), [&]( const watcher& w ) { return _clauses[w.cref].deleted; } ),
                      ws.end() );
    }

    static double luby( double y, int x )
    {
        int size = 1, seq = 0;
        while ( size < x + 1 )
        {
            ++seq;
            size = 2 * size + 1;
        }
        while ( size - 1 != x )
        {
            size = ( size - 1 ) >> 1;
            --seq;
            x = x % size;
        }
        double r = 1;
        for ( int k = 0; k < seq; ++k )
            r *= y;
        return r;
    }

    result search( int conflict_allowance, std::span<const lit> assumptions, const limits& lim, std::uint64_t start_conflicts )
    {
        int local_conflicts = 0;
        std::vector<lit> learnt;
        while ( true )
        {
            const int conflict = propagate();
            if ( conflict != no_reason )
            {
                ++_conflicts;
                ++local_conflicts;
                if ( decision_level() == 0 )
                {
                    _ok = false;
                    return result::unsat;
                }
                int back = 0;
                analyze( conflict, learnt, back );
                cancel_until( back );
                if ( learnt.size() == 1 )
                    assign( learnt[0], no_reason );
                else
                {
                    const int cr = static_cast<int>( _clauses.size() );
                    _clauses.push_back( { learnt, true, false, 0 } );
                    _learnts.push_back( cr );
                    attach( cr );
                    bump_clause( _clauses[cr] );
                    assign( learnt[0], cr );
                }
                _var_inc /= 0.95;
                _cla_inc /= 0.999;

                if ( ( _conflicts & 255 ) == 0 && lim.deadline && std::chrono::steady_clock::now() > *lim.deadline )
                {
                    cancel_until( 0 );
                    return result::unknown;
                }
                if ( lim.conflicts && _conflicts - start_conflicts >= *lim.conflicts )
                {
                    cancel_until( 0 );
                    return result::unknown;
                }
                continue;
            }

            if ( local_conflicts >= conflict_allowance )
            {
                cancel_until( 0 );
                return result::unknown;
            }
            if ( static_cast<double>( _learnts.size() ) - static_cast<double>( _trail.size() ) >= _max_learnts )
                reduce_learnts();

            lit next{};
            while ( decision_level() < static_cast<int>( assumptions.size() ) )
            {
                const lit a = assumptions[decision_level()];
                if ( value_of( a ) == value::t )
                    _trail_lim.push_back( static_cast<int>( _trail.size() ) );
                else if ( value_of( a ) == value::f )
                {
                    cancel_until( 0 );
                    return result::unsat;
                }
                else
                {
                    next = a;
                    break;
                }
            }
            if ( next.x == -2 )
            {
                var v = -1;
                while ( !_heap.empty() )
                {
                    var cand = heap_pop();
                    if ( _assigns[cand] == value::undef )
                    {
                        v = cand;
                        break;
                    }
                }
                if ( v < 0 )
                {
                    _model = _assigns;
                    cancel_until( 0 );
                    return result::sat;
                }
                next = make_lit( v, _phase[v] != 0 );
            }
            _trail_lim.push_back( static_cast<int>( _trail.size() ) );
            assign( next, no_reason );
        }
    }

public:
    var new_var()
    {
        const var v = static_cast<var>( _assigns.size() );
        _assigns.push_back( value::undef );
        _level.push_back( 0 );
        _reason.push_back( no_reason );
        _phase.push_back( 1 );
        _activity.push_back( 0 );
        _seen.push_back( 0 );
        _watches.emplace_back();
        _watches.emplace_back();
        _heap_pos.push_back( -1 );
        heap_insert( v );
        return v;
    }

    [[nodiscard]] std::size_t num_vars() const { return _assigns.size(); }
    [[nodiscard]] std::size_t num_clauses() const { return _clauses.size() - _learnts.size(); }
    [[nodiscard]] std::uint64_t conflicts() const { return _conflicts; }
    [[nodiscard]] bool okay() const { return _ok; }

    // Returns false once the clause set is known to be unsatisfiable.
    bool add_clause( std::vector<lit> c )
    {
        if ( !_ok )
            return false;
        cancel_until( 0 );
        std::sort( c.begin(), c.end() );
        std::vector<lit> kept;
        for ( std::size_t k = 0; k < c.size(); ++k )
        {
            if ( k > 0 && c[k] == c[k - 1] )
                continue;
            if ( k > 0 && c[k] == ~c[k - 1] )
                return true;
            const auto v = value_of( c[k] );
            if ( v == value::t )
                return true;
            if ( v == value::f )
                continue;
            kept.push_back( c[k] );
        }
        if ( kept.empty() )
            return _ok = false;
        if ( kept.size() == 1 )
        {
            assign( kept[0], no_reason );
            if ( propagate() != no_reason )
                _ok = false;
            return _ok;
        }
        const int cr = static_cast<int>( _clauses.size() );
        _clauses.push_back( { std::move( kept ), false, false, 0 } );
        attach( cr );
        return true;
    }

    result solve( std::span<const lit> assumptions = {}, const limits& lim = {} )
    {
        _model.clear();
        if ( !_ok )
            return result::unsat;
        _max_learnts = std::max( 1000.0, static_cast<double>( num_clauses() ) / 3.0 );
        const auto start = _conflicts;
        for ( int restart = 0;; ++restart )
        {
            const auto allowance = static_cast<int>( luby( 2, restart ) * 100 );
            auto r = search( allowance, assumptions, lim, start );
            if ( r != result::unknown )
                return r;
            if ( lim.deadline && std::chrono::steady_clock::now() > *lim.deadline )
                return result::unknown;
            if ( lim.conflicts && _conflicts - start >= *lim.conflicts )
                return result::unknown;
            _max_learnts *= 1.1;
        }
    }

    // Valid after solve() returned sat.
    [[nodiscard]] bool model_value( var v ) const { return _model.at( v ) == value::t; }
    [[nodiscard]] bool model_value( lit p ) const { return model_value( p.variable() ) != p.negated(); }
};

} // namespace bpn::sat
