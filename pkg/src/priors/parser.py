"""
Prior definition file parser.

Prior files use a Blueprint-like block syntax:

    gaussian {
        name: "ladder16",
        dim: 16,
        mean: { kind: "zeros" },
        covariance: { kind: "ladder", base: 0.5 },
    }

Values are strings, numbers (with optional exponent), booleans, lists and
nested maps. Comments use // and /* */. Unlike a lenient build-file scanner,
any unexpected token is an error carrying its line and column.
"""

from dataclasses import dataclass, field
from enum import Enum, auto
from pathlib import Path
from typing import Any, Dict, Iterator, List

from src.utils.errors import PriorConfigError


class TokenType(Enum):
    """Token types for the lexer."""
    IDENTIFIER = auto()
    STRING = auto()
    NUMBER = auto()
    LBRACE = auto()
    RBRACE = auto()
    LBRACKET = auto()
    RBRACKET = auto()
    COLON = auto()
    COMMA = auto()
    EOF = auto()


PUNCTUATION = {
    '{': TokenType.LBRACE,
    '}': TokenType.RBRACE,
    '[': TokenType.LBRACKET,
    ']': TokenType.RBRACKET,
    ':': TokenType.COLON,
    ',': TokenType.COMMA,
}


@dataclass
class Token:
    """A lexical token."""
    type: TokenType
    value: str
    line: int
    column: int


@dataclass
class ParsedBlock:
    """One top-level `kind { ... }` block."""
    block_type: str
    name: str
    properties: Dict[str, Any] = field(default_factory=dict)
    line: int = 0


class PriorFileLexer:
    """Tokenizer for prior definition files."""

    def __init__(self, content: str):
        self.content = content
        self.pos = 0
        self.line = 1
        self.column = 1

    def peek(self, offset: int = 0) -> str:
        pos = self.pos + offset
        if pos < len(self.content):
            return self.content[pos]
        return ''

    def advance(self) -> str:
        if self.pos >= len(self.content):
            return ''
        char = self.content[self.pos]
        self.pos += 1
        if char == '\n':
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return char

    def error(self, message: str) -> PriorConfigError:
        return PriorConfigError(f"line {self.line}, column {self.column}: {message}")

    def read_string(self) -> str:
        """Read a quoted string, handling escapes."""
        quote = self.advance()
        result = []
        while self.peek() and self.peek() != quote:
            if self.peek() == '\\':
                self.advance()
                result.append(self.advance())
            else:
                result.append(self.advance())
        if self.peek() != quote:
            raise self.error("unterminated string")
        self.advance()
        return ''.join(result)

    def read_identifier(self) -> str:
        result = []
        while self.peek() and (self.peek().isalnum() or self.peek() == '_'):
            result.append(self.advance())
        return ''.join(result)

    def read_number(self) -> str:
        """Read a numeric literal such as -1, 0.25 or 1e-3."""
        result = [self.advance()]
        while self.peek():
            char = self.peek()
            if char.isdigit() or char == '.':
                result.append(self.advance())
            elif char in 'eE' and (self.peek(1).isdigit() or self.peek(1) in '+-'):
                result.append(self.advance())
                result.append(self.advance())
            else:
                break
        return ''.join(result)

    def skip_line_comment(self) -> None:
        while self.peek() and self.peek() != '\n':
            self.advance()

    def skip_block_comment(self) -> None:
        self.advance()
        self.advance()
        while self.pos < len(self.content) - 1:
            if self.peek() == '*' and self.peek(1) == '/':
                self.advance()
                self.advance()
                return
            self.advance()
        raise self.error("unterminated block comment")

    def tokenize(self) -> Iterator[Token]:
        """Generate tokens from the content; whitespace and comments are dropped."""
        while self.pos < len(self.content):
            line, col = self.line, self.column
            char = self.peek()

            if char in ' \t\r\n':
                self.advance()
                continue
            if char == '/' and self.peek(1) == '/':
                self.skip_line_comment()
                continue
            if char == '/' and self.peek(1) == '*':
                self.skip_block_comment()
                continue
            if char in '"\'':
                yield Token(TokenType.STRING, self.read_string(), line, col)
                continue
            if char.isalpha() or char == '_':
                yield Token(TokenType.IDENTIFIER, self.read_identifier(), line, col)
                continue
            if char.isdigit() or (char in '-+.' and (self.peek(1).isdigit() or self.peek(1) == '.')):
                yield Token(TokenType.NUMBER, self.read_number(), line, col)
                continue
            if char in PUNCTUATION:
                self.advance()
                yield Token(PUNCTUATION[char], char, line, col)
                continue
            raise self.error(f"unexpected character {char!r}")

        yield Token(TokenType.EOF, '', self.line, self.column)


class PriorFileParser:
    """
    Parser for prior definition files.

    Grammar:
        file   := block*
        block  := IDENT '{' props '}'
        props  := (IDENT ':' value ','?)*
        value  := STRING | NUMBER | true | false | list | map
    """

    def __init__(self, content: str):
        self.content = content
        self.tokens: List[Token] = []
        self.pos = 0

    def parse(self) -> List[ParsedBlock]:
        """Parse the content and return its top-level blocks."""
        self.tokens = list(PriorFileLexer(self.content).tokenize())
        self.pos = 0
        blocks = []
        while self._current().type != TokenType.EOF:
            blocks.append(self._parse_block())
        return blocks

    def _current(self) -> Token:
        return self.tokens[min(self.pos, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self._current()
        self.pos += 1
        return token

    def _error(self, message: str, token: Token) -> PriorConfigError:
        return PriorConfigError(f"line {token.line}, column {token.column}: {message}")

    def _expect(self, token_type: TokenType) -> Token:
        token = self._current()
        if token.type != token_type:
            raise self._error(f"expected {token_type.name}, got {token.type.name} {token.value!r}", token)
        return self._advance()

    def _parse_block(self) -> ParsedBlock:
        head = self._expect(TokenType.IDENTIFIER)
        self._expect(TokenType.LBRACE)
        properties = self._parse_properties()
        self._expect(TokenType.RBRACE)
        return ParsedBlock(
            block_type=head.value,
            name=str(properties.get('name', '')),
            properties=properties,
            line=head.line,
        )

    def _parse_properties(self) -> Dict[str, Any]:
        properties: Dict[str, Any] = {}
        while self._current().type not in (TokenType.RBRACE, TokenType.EOF):
            key = self._expect(TokenType.IDENTIFIER)
            if key.value in properties:
                raise self._error(f"duplicate key {key.value!r}", key)
            self._expect(TokenType.COLON)
            properties[key.value] = self._parse_value()
            if self._current().type == TokenType.COMMA:
                self._advance()
            elif self._current().type != TokenType.RBRACE:
                raise self._error("expected ',' or '}'", self._current())
        return properties

    def _parse_value(self) -> Any:
        token = self._current()

        if token.type == TokenType.STRING:
            self._advance()
            return token.value

        if token.type == TokenType.NUMBER:
            self._advance()
            try:
                if any(c in token.value for c in '.eE'):
                    return float(token.value)
                return int(token.value)
            except ValueError:
                raise self._error(f"malformed number {token.value!r}", token) from None

        if token.type == TokenType.IDENTIFIER and token.value in ('true', 'false'):
            self._advance()
            return token.value == 'true'

        if token.type == TokenType.LBRACKET:
            return self._parse_list()

        if token.type == TokenType.LBRACE:
            self._advance()
            value = self._parse_properties()
            self._expect(TokenType.RBRACE)
            return value

        raise self._error(f"unexpected {token.type.name} {token.value!r}", token)

    def _parse_list(self) -> List[Any]:
        self._expect(TokenType.LBRACKET)
        items = []
        while self._current().type not in (TokenType.RBRACKET, TokenType.EOF):
            items.append(self._parse_value())
            if self._current().type == TokenType.COMMA:
                self._advance()
            elif self._current().type != TokenType.RBRACKET:
                raise self._error("expected ',' or ']'", self._current())
        self._expect(TokenType.RBRACKET)
        return items


def parse_prior_file(path: Path) -> List[ParsedBlock]:
    """Read and parse a prior definition file."""
    path = Path(path)
    try:
        content = path.read_text(encoding='utf-8')
    except OSError as e:
        raise PriorConfigError(f"cannot read prior file {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise PriorConfigError(f"prior file {path} is not valid UTF-8 text: {e}") from e
    return PriorFileParser(content).parse()
