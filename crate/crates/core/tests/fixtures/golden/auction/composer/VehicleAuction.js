'use strict';

/**
 * Transaction processor functions for VehicleAuction.
 */

/**
 * PlaceBid transaction.
 * @param {org.vehicleauction.PlaceBid} tx the submitted transaction
 * @transaction
 */
async function placeBid(tx) {
    // transaction logic
}

/**
 * CloseBidding transaction.
 * @param {org.vehicleauction.CloseBidding} tx the submitted transaction
 * @transaction
 */
async function closeBidding(tx) {
    // transaction logic
}
