"""
LR(k) parser construction and the table-driven parse loop.

`make_lrparser` builds the canonical LR(k) automaton of a grammar and
returns an object with a single interesting method, `parse`.

    >>> g1 = Grammar(
    ...     Rule('items', ('item',), lambda ctx, i: [i]),
    ...     Rule('items', ('items', '(+)', 'item'), lambda ctx, l, op, i: l + [i]),
    ...     )
    >>> p1 = make_lrparser(g1)
    >>> p1.parse(['item'])
    ['item']
    >>> p1.parse(['item', '(+)', 'item'])
    ['item', 'item']

Rules without an action build a plain parse tree out of tuples.

    >>> make_lrparser(Grammar(Rule('items', ('item',)), Rule('items', ('items', '(+)', 'item')))).parse(['item', '(+)', 'item'])
    (('item',), '(+)', 'item')

Tokens
------
The parser recovers the terminal symbol of a token with `extract_symbol`
and the value passed to the semantic actions with `extract_value`.
The defaults work with

 1. tuples `(symbol, value, pos)`, where `pos` is optional,
 2. objects with `symbol`, `value` and optionally `pos` members, and
 3. anything else, which stands for both the symbol and the value.

    >>> p1.parse([('item', 'Q'), ('(+)', '(+)'), ('item', 'Z')])
    ['Q', 'Z']
    >>> p1.parse('xx', extract_symbol=lambda tok: 'item')
    Traceback (most recent call last):
        ...
    minlab.lrparser.UnexpectedTokenError: 2: error: unexpected token: 'x' ('item')

The context passed to the actions is `None` unless the `context`
argument of `parse` says otherwise.

Construction errors
-------------------
A grammar that is not LR(k) raises `ActionConflictError`.

    >>> g2 = Grammar(
    ...     Rule('sum', ('sum', '(+)', 'sum')),
    ...     Rule('sum', ('item',)),
    ...     )
    >>> make_lrparser(g2)
    Traceback (most recent call last):
        ...
    minlab.lrparser.ActionConflictError: shift/reduce conflict during LR(1) parser construction

The exception keeps the automaton; `format_trace` prints the path of
states leading to the conflict with the offending items marked by `>`.
"""

from .rule import Rule
from .grammar import Grammar
from .first import First
import logging

logger = logging.getLogger(__name__)

def _extract_symbol(token):
    return token[0] if isinstance(token, tuple) else getattr(token, 'symbol', token)

def _extract_value(token):
    if isinstance(token, tuple):
        return token[1] if len(token) > 1 else token[0]
    return getattr(token, 'value', token)

def _extract_location(token, token_index=None):
    if isinstance(token, tuple):
        return token[2] if len(token) > 2 else token_index
    return getattr(token, 'pos', token_index)

class InvalidGrammarError(Exception):
    """Raised during parser construction if the grammar is unusable."""

class ActionConflictError(Exception):
    """Raised during parser construction if the grammar is not LR(k)."""
    def __init__(self, message, conflicting_state, states, g, item1, item2):
        Exception.__init__(self, message)
        self.states = states
        self.conflicting_state = conflicting_state
        self.g = g
        self.item1 = item1
        self.item2 = item2

    def format_trace(self):
        state = self.conflicting_state
        res = ['\n'.join(('>' if i in (self.item1, self.item2) else ' ') + _format_item(item)
            for i, item in enumerate(state.itemlist))]

        while state.parent_id is not None:
            parent_symbol = state.parent_symbol
            state = self.states[state.parent_id]
            res.append('\n'.join(('>' if _next_token(item) == parent_symbol else ' ') + _format_item(item)
                for item in state.itemlist))

        return '\n\n'.join(reversed(res))

class ParsingError(RuntimeError):
    """Raised by a parser if the input is not a sentence of the grammar."""
    def __init__(self, message, pos=None):
        RuntimeError.__init__(self, message)
        self.pos = pos

    def format(self, severity='error'):
        return '%s: %s: %s' % (self.pos, severity, self.args[0])

    def __str__(self):
        return self.format()

class UnexpectedTokenError(ParsingError):
    def __init__(self, token, pos=None, symbol=None):
        pos = _extract_location(token, pos)
        if symbol is None:
            symbol = _extract_symbol(token)
        ParsingError.__init__(self, 'unexpected token: %r (%r)' % (_extract_value(token), symbol), pos)
        self.token = token

class PrematureEndOfFileError(ParsingError):
    """Raised when the input ends in the middle of a sentence."""

def _next_token(item):
    return item.rule.right[item.index] if not item.final else None

def _format_item(item, symbol_repr=repr):
    """
    >>> print(_format_item(_Item(Rule('item', ('atom', '^', 'mult')), 1, ('(+)',))))
    'item' = 'atom' . '^', 'mult'; ('(+)')
    >>> print(_format_item(_Item(Rule('item', ('atom',)), 1, ())))
    'item' = 'atom' . ;
    """
    right_syms = [symbol_repr(symbol) for symbol in item.rule.right]
    if item.index == 0:
        if not right_syms:
            right_syms = ['. ']
        else:
            right_syms[0] = '. ' + right_syms[0]
    elif item.index == len(right_syms):
        right_syms[-1] = right_syms[-1] + ' . '
    else:
        right_syms[item.index - 1] = right_syms[item.index - 1] + ' . ' + right_syms[item.index]
        del right_syms[item.index]

    lookahead = ''.join((' (', ', '.join(symbol_repr(token) for token in item.lookahead), ')')) if item.lookahead else ''
    return ''.join((repr(item.rule.left), ' = ', ', '.join(right_syms), ';', lookahead))

class _LrParser:
    """A table-driven LR(k) parser.

    The tables are built in the constructor; `InvalidGrammarError` or
    `ActionConflictError` is raised if that is impossible.

    >>> p = _LrParser(Grammar(
    ...     Rule('mult', ('INT',), action=lambda ctx, n: int(n)),
    ...     Rule('mult', ('w',), action=lambda ctx, w: None)))
    >>> p.parse([('INT', '12')])
    12
    >>> p.parse([]) # doctest: +ELLIPSIS
    Traceback (most recent call last):
        ...
    minlab.lrparser.PrematureEndOfFileError: ...
    """

    def __init__(self, grammar, k=1, keep_states=False, root=None):
        if len(grammar) == 0:
            raise InvalidGrammarError('The grammar needs at least one rule.')

        if root is None:
            root = [grammar[0].left]
        elif any(sym not in grammar.symbols() for sym in root):
            raise InvalidGrammarError('The root sentential form is invalid')

        self.grammar = grammar
        self.k = k
        self.root = tuple(root)

        # The augmented grammar gets a new start symbol ''.
        aug_grammar = Grammar(Rule('', self.root), *grammar)
        first = First(aug_grammar, k)

        kernel0 = frozenset([_Item(aug_grammar[0], 0, ())])
        states = [State(kernel0, aug_grammar, first)]
        state_kernel_map = {kernel0: 0}

        i = 0
        while i < len(states):
            state = states[i]

            parts = {}
            for item in state.itemlist:
                sym = _next_token(item)
                if sym is not None:
                    parts.setdefault(sym, []).append(_Item(item.rule, item.index + 1, item.lookahead))

            for symbol, kernel in parts.items():
                kernel = frozenset(kernel)
                old_index = state_kernel_map.get(kernel)
                if old_index is not None:
                    state.goto[symbol] = old_index
                    continue

                newstate = State(kernel, aug_grammar, first)
                newstate.parent_id = i
                newstate.parent_symbol = symbol
                state_kernel_map[kernel] = len(states)
                state.goto[symbol] = len(states)
                states.append(newstate)

            i += 1

        accepting_state = None

        def add_action(state, lookahead, action, item_index):
            if lookahead in state.action and state.action[lookahead] != action:
                conflict_type = 'shift/reduce' if action is None or state.action[lookahead] is None else 'reduce/reduce'
                raise ActionConflictError('%s conflict during LR(%d) parser construction' % (conflict_type, k),
                    state, states, grammar, item_index, state.action_origin[lookahead])
            state.action[lookahead] = action
            state.action_origin[lookahead] = item_index

        for state_id, state in enumerate(states):
            for item_index, item in enumerate(state.itemlist):
                nt = _next_token(item)
                if nt is None:
                    if item.rule.left == '':
                        accepting_state = state_id
                        add_action(state, item.lookahead, None, item_index)
                    else:
                        add_action(state, item.lookahead, item.rule, item_index)
                elif aug_grammar.is_terminal(nt):
                    word = item.rule.right[item.index:] + item.lookahead
                    for w in first(word[1:]):
                        add_action(state, (word[:1] + w)[:k], None, item_index)

        assert accepting_state is not None
        logger.debug('built LR(%d) automaton with %d states for %d rules', k, len(states), len(grammar))

        self.accepting_state = accepting_state
        self.states = states

        if not keep_states:
            for state in states:
                del state.itemlist

    def parse(self, sentence, context=None, extract_symbol=_extract_symbol,
            extract_value=_extract_value, shift_visitor=None, reducer=None):

        def default_reducer(rule, ctx, *args):
            if rule.action is None:
                return args
            return rule.action(ctx, *args)
        reducer = reducer or default_reducer

        it = iter(sentence)
        lookahead = []

        def update_lookahead():
            while len(lookahead) < self.k:
                try:
                    lookahead.append(next(it))
                except StopIteration:
                    break

        def get_shift_token():
            if not lookahead:
                return None
            return lookahead.pop(0)

        stack = [0]
        asts = []
        token_counter = 0
        last_location = None
        while True:
            state = self.states[stack[-1]]

            update_lookahead()
            key = tuple(extract_symbol(token) for token in lookahead)
            if key not in state.action:
                if not lookahead:
                    raise PrematureEndOfFileError('unexpected end of input', last_location)
                raise UnexpectedTokenError(lookahead[0], token_counter + 1, key[0])
            action = state.action[key]

            if action is not None:
                n = len(action.right)
                args = asts[len(asts) - n:]
                new_ast = reducer(action, context, *args)
                if n:
                    del stack[-n:]
                    del asts[-n:]

                next_state = self.states[stack[-1]].goto.get(action.left)
                assert next_state is not None
                stack.append(next_state)
                asts.append(new_ast)
            else:
                tok = get_shift_token()
                if shift_visitor:
                    shift_visitor(tok)
                if tok is None:
                    if stack[-1] == self.accepting_state:
                        assert len(asts) == 1
                        return asts[0]
                    raise PrematureEndOfFileError('unexpected end of input', last_location)
                token_counter += 1
                last_location = _extract_location(tok, token_counter)

                next_state = state.goto.get(extract_symbol(tok))
                if next_state is None:
                    raise UnexpectedTokenError(tok, token_counter, extract_symbol(tok))

                stack.append(next_state)
                asts.append(extract_value(tok))

class State:
    """A single state of the LR(k) automaton.

    `goto` maps symbols to state indices; `action` maps lookahead
    tuples to either `None` (shift) or the `Rule` to reduce by.
    """

    def __init__(self, kernel, grammar, first):
        self.kernel = frozenset(kernel)
        self._close(kernel, grammar, first)
        self.parent_id = None
        self.parent_symbol = None

        self.goto = {}
        self.action = {}
        self.action_origin = {}

    def __repr__(self):
        return 'State(%d items)' % len(self.kernel)

    def _close(self, kernel, grammar, first):
        itemset = set(kernel)
        itemlist = list(kernel)
        i = 0
        while i < len(itemlist):
            curitem = itemlist[i]
            rule_suffix = curitem.rule.right[curitem.index + 1:]
            for next_lookahead in first(rule_suffix + curitem.lookahead):
                for next_rule in grammar.rules(_next_token(curitem)):
                    newitem = _Item(next_rule, 0, next_lookahead)
                    if newitem not in itemset:
                        itemlist.append(newitem)
                        itemset.add(newitem)
            i += 1
        self.itemlist = tuple(itemlist)

class _Item:
    def __init__(self, rule, index, lookahead):
        self.rule = rule
        self.index = index
        self.lookahead = lookahead
        self.final = len(rule.right) <= index

    def __eq__(self, other):
        return (self.rule, self.index, self.lookahead) == (other.rule, other.index, other.lookahead)

    def __hash__(self):
        return hash((self.rule, self.index, self.lookahead))

def make_lrparser(g, k=1, keep_states=False, root=None):
    return _LrParser(g, k=k, keep_states=keep_states, root=root)
