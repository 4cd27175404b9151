import { describe, expect, it } from 'vitest';
import { nerType, personGender } from '../src/ner';
import { tagTokens } from '../src/tag';
import { tokenize } from '../src/tokenize';

function typeOf(phrase: string): string | null {
  // Embed in a carrier so capitalized words sit mid-sentence.
  const tokens = tagTokens(tokenize(`met ${phrase}`)).slice(1);
  return nerType(tokens);
}

describe('nerType', () => {
  it('types known given names as people', () => {
    expect(typeOf('Janet Mercer')).toBe('person');
    expect(typeOf('John Podesta')).toBe('person');
  });

  it('types honorific-led phrases as people', () => {
    expect(typeOf('Senator Hale')).toBe('person');
  });

  it('types organization cue words', () => {
    expect(typeOf('the Harbor Group')).toBe('organization');
    expect(typeOf('the Lakeside Foundation')).toBe('organization');
  });

  it('types acronyms as organizations', () => {
    expect(typeOf('the FBI')).toBe('organization');
  });

  it('types gazetteer places', () => {
    expect(typeOf('Riverton')).toBe('location');
  });

  it('leaves common phrases untyped', () => {
    expect(typeOf('the cache')).toBeNull();
    expect(typeOf('everything')).toBeNull();
  });

  it('defaults unknown two-word proper names to person', () => {
    expect(typeOf('Yuri Malenkov')).toBe('person');
  });

  it('prefers organization cues over person names', () => {
    // A person's name inside an organization title stays organizational.
    expect(typeOf('the Janet Mercer Foundation')).toBe('organization');
  });
});

describe('personGender', () => {
  it('buckets known given names', () => {
    expect(personGender(tagTokens(tokenize('met Janet Mercer')).slice(1)))
      .toBe('female');
    expect(personGender(tagTokens(tokenize('met Victor Hale')).slice(1)))
      .toBe('male');
  });

  it('uses honorifics when the given name is unknown', () => {
    expect(personGender(tagTokens(tokenize('met Mrs Stroud')).slice(1)))
      .toBe('female');
  });

  it('returns null for organizations', () => {
    expect(personGender(tagTokens(tokenize('met the Harbor Group')).slice(1)))
      .toBeNull();
  });
});
