import assert from 'node:assert/strict';
import { test } from 'node:test';

import { buildWishDialog, renderWishDialog, renderWishError, submitWish } from '../src/wishDialog.js';
import { findAll, renderToString } from '../src/vdom.js';
import { clientFor, fixture } from './helpers.js';

const calendar = fixture('calendar_involved').body;
const cycleInfo = fixture('cycle_info').body;

function day(date: string) {
  return calendar.days.find((d: any) => d.date === date)!;
}

test('weekday dialog offers all three scopes', () => {
  const model = buildWishDialog(day('2019-06-12'), 5, cycleInfo.wish_examples);
  assert.deepEqual(
    model.scopes.map((s) => [s.scope, s.disabled]),
    [
      ['morning', false],
      ['afternoon', false],
      ['whole_day', false],
    ],
  );
  assert.equal(model.submittable, true);
});

test('whole day is disabled on a work weekend', () => {
  const saturday = calendar.days.find((d: any) => d.weekend_status === 'work_weekend')!;
  const model = buildWishDialog(saturday, 5, []);
  const wholeDay = model.scopes.find((s) => s.scope === 'whole_day')!;
  assert.equal(wholeDay.disabled, true);
  assert.equal(model.scopes.find((s) => s.scope === 'morning')!.disabled, false);

  const html = renderToString(renderWishDialog(model));
  const disabled = findAll(renderWishDialog(model), (n) => n.attrs['disabled'] === 'disabled');
  assert.equal(disabled.length, 1);
  assert.ok(html.includes('work weekends'));
});

test('a free weekend accepts nothing', () => {
  const free = calendar.days.find((d: any) => d.weekend_status === 'free_weekend')!;
  const model = buildWishDialog(free, 5, []);
  assert.equal(model.submittable, false);
  assert.ok(model.scopes.every((s) => s.scope === 'whole_day' || s.disabled));
});

test('quota errors surface with the remaining count', async () => {
  const quota = fixture('error_quota');
  const { api } = clientFor({ 'POST /cycles/2019-06/wishes': quota });
  const model = buildWishDialog(day('2019-06-12'), 0, []);
  const result = await submitWish(api, '2019-06', model, 'morning');
  assert.equal(result.ok, false);
  assert.equal(result.error, 'QuotaExceeded');
  assert.equal(result.remaining, 0);

  const html = renderToString(renderWishError(result));
  assert.ok(html.includes('0 remaining'));
});

test('weekend rejections from the server are surfaced verbatim', async () => {
  for (const name of ['error_whole_day_weekend', 'error_free_weekend']) {
    const recorded = fixture(name);
    const { api } = clientFor({ 'POST /cycles/2019-06/wishes': recorded });
    const model = buildWishDialog(day('2019-06-12'), 5, []);
    const result = await submitWish(api, '2019-06', model, 'whole_day');
    assert.equal(result.ok, false);
    assert.equal(result.error, recorded.body.error);
  }
});

test('successful submission returns the server wish id', async () => {
  const created = fixture('wish_created');
  const { api, calls } = clientFor({ 'POST /cycles/2019-06/wishes': created });
  const model = buildWishDialog(day('2019-06-20'), 4, []);
  const result = await submitWish(api, '2019-06', model, 'morning');
  assert.equal(result.ok, true);
  assert.equal(result.wishId, created.body.wish_id);
  assert.deepEqual(calls, ['POST /cycles/2019-06/wishes']);
});

test('example prompts from the config appear in the dialog', () => {
  const model = buildWishDialog(day('2019-06-12'), 5, cycleInfo.wish_examples);
  const html = renderToString(renderWishDialog(model));
  for (const example of cycleInfo.wish_examples) {
    assert.ok(html.includes(example));
  }
});

test('no justification input exists anywhere in the dialog', () => {
  const model = buildWishDialog(day('2019-06-12'), 5, cycleInfo.wish_examples);
  const tree = renderWishDialog(model);
  const inputs = findAll(tree, (n) => ['input', 'textarea', 'select'].includes(n.tag));
  assert.equal(inputs.length, 0, 'the dialog offers buttons only, no text entry');
  const html = renderToString(tree).toLowerCase();
  for (const word of ['justification', 'reason', 'comment']) {
    assert.ok(!html.includes(word));
  }
});
