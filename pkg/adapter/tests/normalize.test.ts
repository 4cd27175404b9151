import { describe, expect, it } from 'vitest';
import { headWord, lemma, normalizeObject, normalizeSubject } from '../src/normalize';
import { tagTokens } from '../src/tag';
import { tokenize } from '../src/tokenize';

function toks(text: string) {
  return tagTokens(tokenize(text));
}

describe('phrase normalization', () => {
  it('keeps the determiner on subjects', () => {
    expect(normalizeSubject(toks('The spark'))).toBe('The spark');
  });

  it('drops a leading determiner on objects', () => {
    expect(normalizeObject(toks('the cache of e-mails'))).toBe('cache of emails');
  });

  it('keeps a bare determiner-less object intact', () => {
    expect(normalizeObject(toks('John Podesta'))).toBe('John Podesta');
  });

  it('never reduces a lone determiner-like word to nothing', () => {
    expect(normalizeObject(toks('the'))).toBe('the');
  });

  it('strips possessive markers', () => {
    expect(normalizeObject(toks("chair of Clinton's campaign")))
      .toBe('chair of Clinton campaign');
    expect(normalizeObject(toks("the senators' aides")))
      .toBe('senators aides');
  });

  it('collapses hyphenated compounds', () => {
    expect(normalizeObject(toks('the e-mail archive'))).toBe('email archive');
  });
});

describe('headWord', () => {
  it('takes the last nominal token, lowercased and cleaned', () => {
    expect(headWord(toks('The spark'))).toBe('spark');
    expect(headWord(toks('John Podesta'))).toBe('podesta');
    expect(headWord(toks("Clinton's campaign"))).toBe('campaign');
  });
});

describe('lemma', () => {
  it('maps copula forms to be', () => {
    for (const form of ['is', 'was', 'are', 'were']) {
      expect(lemma(form)).toBe('be');
    }
  });

  it('maps irregular participles', () => {
    expect(lemma('stolen')).toBe('steal');
    expect(lemma('taken')).toBe('take');
  });

  it('strips regular -ed endings', () => {
    expect(lemma('leaked')).toBe('leak');
    expect(lemma('funded')).toBe('fund');
  });

  it('undoubles a doubled final consonant', () => {
    expect(lemma('planned')).toBe('plan');
  });

  it('restores -y from -ies', () => {
    expect(lemma('denies')).toBe('deny');
  });

  it('strips third-person -s', () => {
    expect(lemma('runs')).toBe('run');
    expect(lemma('reaches')).toBe('reach');
  });

  it('is case-insensitive', () => {
    expect(lemma('Was')).toBe('be');
  });
});
